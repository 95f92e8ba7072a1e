// Copyright 2026 The eavesim developers.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Exact small-dimension complex linear algebra: density matrices, tensor
 * products, partial traces, Born-rule probabilities and POVM validity checks.
 * Dimensions are fixed to 2, 4 and 8 (qubit, probe, qubit-plus-probe).
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eavesim {

using Complex = std::complex<double>;

// Measurement operators announced by Alice.
enum class Basis { Sigma1, Sigma3 };

// States Bob can prepare: |0>, |1>, |+>, |->.
enum class Prepared { Rho0, Rho1, RhoPlus, RhoMinus };

inline constexpr std::array<Prepared, 4> kAllPrepared = {
    Prepared::Rho0, Prepared::Rho1, Prepared::RhoPlus, Prepared::RhoMinus};

inline constexpr std::array<Basis, 2> kAllBases = {Basis::Sigma1,
                                                   Basis::Sigma3};

inline std::string to_string(Prepared p) {
    switch (p) {
    case Prepared::Rho0:
        return "rho0";
    case Prepared::Rho1:
        return "rho1";
    case Prepared::RhoPlus:
        return "rho+";
    default:
        return "rho-";
    }
}

inline std::string to_string(Basis b) {
    return b == Basis::Sigma1 ? "s1" : "s3";
}

inline Prepared prepared_from_string(const std::string &s) {
    if (s == "rho0")
        return Prepared::Rho0;
    if (s == "rho1")
        return Prepared::Rho1;
    if (s == "rho+")
        return Prepared::RhoPlus;
    if (s == "rho-")
        return Prepared::RhoMinus;
    throw std::invalid_argument("unknown prepared-state label: " + s);
}

inline Basis basis_from_string(const std::string &s) {
    if (s == "s1")
        return Basis::Sigma1;
    if (s == "s3")
        return Basis::Sigma3;
    throw std::invalid_argument("unknown basis label: " + s);
}

namespace qmath {

inline bool supported_dim(int dim) { return dim == 2 || dim == 4 || dim == 8; }

// Dense row-major complex matrix of dimension 2, 4 or 8.
class ComplexMatrix {
  public:
    explicit ComplexMatrix(int dim) : dim_(dim), data_(dim * dim) {
        if (!supported_dim(dim))
            throw std::invalid_argument(
                "unsupported dimension: " + std::to_string(dim) +
                " (supported: 2, 4, 8)");
    }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i)
            m(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }

    Complex &operator()(int r, int c) { return data_[r * dim_ + c]; }
    const Complex &operator()(int r, int c) const {
        return data_[r * dim_ + c];
    }

    Complex trace() const {
        Complex t = 0.0;
        for (int i = 0; i < dim_; ++i)
            t += (*this)(i, i);
        return t;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(dim_);
        for (int r = 0; r < dim_; ++r)
            for (int c = 0; c < dim_; ++c)
                out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    ComplexMatrix &operator+=(const ComplexMatrix &rhs) {
        check_same_dim(rhs);
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] += rhs.data_[i];
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &rhs) {
        check_same_dim(rhs);
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] -= rhs.data_[i];
        return *this;
    }

    ComplexMatrix &operator*=(Complex s) {
        for (auto &v : data_)
            v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
        a += b;
        return a;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
        a -= b;
        return a;
    }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) {
        a *= s;
        return a;
    }

    friend ComplexMatrix operator*(const ComplexMatrix &a,
                                   const ComplexMatrix &b) {
        a.check_same_dim(b);
        const int n = a.dim_;
        ComplexMatrix out(n);
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < n; ++k) {
                const Complex ark = a(r, k);
                if (ark == 0.0)
                    continue;
                for (int c = 0; c < n; ++c)
                    out(r, c) += ark * b(k, c);
            }
        return out;
    }

    // Largest entrywise |a-b|.
    double max_abs_diff(const ComplexMatrix &rhs) const {
        check_same_dim(rhs);
        double m = 0.0;
        for (std::size_t i = 0; i < data_.size(); ++i)
            m = std::max(m, std::abs(data_[i] - rhs.data_[i]));
        return m;
    }

    bool is_hermitian(double tol) const {
        for (int r = 0; r < dim_; ++r)
            for (int c = r; c < dim_; ++c)
                if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol)
                    return false;
        return true;
    }

  private:
    void check_same_dim(const ComplexMatrix &rhs) const {
        if (dim_ != rhs.dim_)
            throw std::invalid_argument("dimension mismatch: " +
                                        std::to_string(dim_) + " vs " +
                                        std::to_string(rhs.dim_));
    }

    int dim_;
    std::vector<Complex> data_;
};

// Unit-norm complex vector of dimension 2, 4 or 8.
class StateVector {
  public:
    StateVector(std::vector<Complex> amplitudes)
        : amp_(std::move(amplitudes)) {
        if (!supported_dim(static_cast<int>(amp_.size())))
            throw std::invalid_argument("unsupported state-vector dimension");
        double n2 = 0.0;
        for (const auto &a : amp_)
            n2 += std::norm(a);
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
            throw std::invalid_argument("state vector is not unit norm");
    }

    static StateVector basis_state(int dim, int index) {
        std::vector<Complex> a(dim, 0.0);
        a.at(index) = 1.0;
        return StateVector(std::move(a));
    }

    int dim() const { return static_cast<int>(amp_.size()); }
    const Complex &operator[](int i) const { return amp_[i]; }

    // |v><v|
    ComplexMatrix projector() const {
        ComplexMatrix m(dim());
        for (int r = 0; r < dim(); ++r)
            for (int c = 0; c < dim(); ++c)
                m(r, c) = amp_[r] * std::conj(amp_[c]);
        return m;
    }

  private:
    std::vector<Complex> amp_;
};

// <a|b>
inline Complex inner(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("dimension mismatch in inner product");
    Complex s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

inline StateVector tensor_product(const StateVector &a, const StateVector &b) {
    const int dim = a.dim() * b.dim();
    if (!supported_dim(dim))
        throw std::invalid_argument("unsupported dimension: tensor product "
                                    "exceeds the supported 2/4/8 range");
    std::vector<Complex> out(dim);
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
            out[i * b.dim() + j] = a[i] * b[j];
    return StateVector(std::move(out));
}

// Kronecker product; result dimension a.dim * b.dim must stay within 8.
inline ComplexMatrix tensor_product(const ComplexMatrix &a,
                                    const ComplexMatrix &b) {
    const int dim = a.dim() * b.dim();
    if (!supported_dim(dim))
        throw std::invalid_argument("unsupported dimension: tensor product "
                                    "exceeds the supported 2/4/8 range");
    ComplexMatrix out(dim);
    for (int ar = 0; ar < a.dim(); ++ar)
        for (int ac = 0; ac < a.dim(); ++ac) {
            const Complex v = a(ar, ac);
            if (v == 0.0)
                continue;
            for (int br = 0; br < b.dim(); ++br)
                for (int bc = 0; bc < b.dim(); ++bc)
                    out(ar * b.dim() + br, ac * b.dim() + bc) = v * b(br, bc);
        }
    return out;
}

// Trace over the second tensor factor of dimension d2; trace-preserving.
inline ComplexMatrix partial_trace_second(const ComplexMatrix &m, int d2) {
    if (d2 <= 0 || m.dim() % d2 != 0)
        throw std::invalid_argument("dimension mismatch: " +
                                    std::to_string(m.dim()) +
                                    " not divisible by " + std::to_string(d2));
    const int d1 = m.dim() / d2;
    ComplexMatrix out(d1);
    for (int r = 0; r < d1; ++r)
        for (int c = 0; c < d1; ++c) {
            Complex s = 0.0;
            for (int k = 0; k < d2; ++k)
                s += m(r * d2 + k, c * d2 + k);
            out(r, c) = s;
        }
    return out;
}

// Trace over the first tensor factor of dimension d1; trace-preserving.
inline ComplexMatrix partial_trace_first(const ComplexMatrix &m, int d1) {
    if (d1 <= 0 || m.dim() % d1 != 0)
        throw std::invalid_argument("dimension mismatch: " +
                                    std::to_string(m.dim()) +
                                    " not divisible by " + std::to_string(d1));
    const int d2 = m.dim() / d1;
    ComplexMatrix out(d2);
    for (int r = 0; r < d2; ++r)
        for (int c = 0; c < d2; ++c) {
            Complex s = 0.0;
            for (int k = 0; k < d1; ++k)
                s += m(k * d2 + r, k * d2 + c);
            out(r, c) = s;
        }
    return out;
}

// Eigenvalues of a Hermitian matrix, ascending, via cyclic complex Jacobi
// rotations. Intended for the validation paths only (dims are at most 8).
inline std::vector<double> hermitian_eigenvalues(ComplexMatrix a) {
    const int n = a.dim();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off2 = 0.0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q)
                off2 += std::norm(a(p, q));
        if (off2 < 1e-30)
            break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r < 1e-300)
                    continue;
                const Complex u = apq / r; // phase of the pivot
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                // Root of t^2 - 2*tau*t - 1 = 0 with the smaller magnitude;
                // zeroes the pivot under the [[c,-s],[s,c]] convention.
                const double t =
                    (tau >= 0.0 ? -1.0 : 1.0) /
                    (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Unitary G: identity except G(p,p)=c, G(p,q)=-s,
                // G(q,p)=conj(u)*s, G(q,q)=conj(u)*c; apply a <- G^dag a G.
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q)
                        continue;
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp + std::conj(u) * s * akq;
                    a(k, q) = -s * akp + std::conj(u) * c * akq;
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                a(p, p) = app + t * r;
                a(q, q) = aqq - t * r;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i)
        eig[i] = a(i, i).real();
    std::sort(eig.begin(), eig.end());
    return eig;
}

// Gauss-Jordan inverse with partial pivoting.
inline ComplexMatrix inverse(const ComplexMatrix &m) {
    const int n = m.dim();
    ComplexMatrix a = m;
    ComplexMatrix inv = ComplexMatrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col)))
                pivot = r;
        if (std::abs(a(pivot, col)) < 1e-14)
            throw std::invalid_argument("matrix is numerically singular");
        if (pivot != col)
            for (int c = 0; c < n; ++c) {
                std::swap(a(pivot, c), a(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        const Complex d = a(col, col);
        for (int c = 0; c < n; ++c) {
            a(col, c) /= d;
            inv(col, c) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col)
                continue;
            const Complex f = a(r, col);
            if (f == 0.0)
                continue;
            for (int c = 0; c < n; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

// Trace-one positive-semidefinite Hermitian matrix; validated on
// construction (Hermitian and unit trace within 1e-12, eigenvalues
// at least -1e-10 to absorb accumulated floating error in 8x8 products).
class DensityMatrix {
  public:
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
        if (!m_.is_hermitian(1e-12))
            throw std::invalid_argument("density matrix is not Hermitian");
        if (std::abs(m_.trace() - Complex(1.0)) > 1e-12)
            throw std::invalid_argument("density matrix trace is not one");
        const auto eig = hermitian_eigenvalues(m_);
        if (eig.front() < -1e-10)
            throw std::invalid_argument(
                "density matrix is not positive semidefinite (min eigenvalue " +
                std::to_string(eig.front()) + ")");
    }

    int dim() const { return m_.dim(); }
    const ComplexMatrix &matrix() const { return m_; }

  private:
    ComplexMatrix m_;
};

// Re(Tr(a*b)) without forming the product matrix.
inline double real_trace_product(const ComplexMatrix &a,
                                 const ComplexMatrix &b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("dimension mismatch in trace product");
    Complex s = 0.0;
    for (int r = 0; r < a.dim(); ++r)
        for (int k = 0; k < a.dim(); ++k)
            s += a(r, k) * b(k, r);
    return s.real();
}

// Tr(effect * state), clamped to [0,1] when within 1e-10 of the boundary.
inline double born_probability(const DensityMatrix &state,
                               const ComplexMatrix &effect) {
    const double p = real_trace_product(effect, state.matrix());
    if (p < -1e-10 || p > 1.0 + 1e-10)
        throw std::invalid_argument(
            "invalid effect: Born probability " + std::to_string(p) +
            " falls outside [0,1]");
    return std::clamp(p, 0.0, 1.0);
}

struct PovmValidity {
    bool valid = true;
    double completeness_residual = 0.0; // max entrywise |sum - identity|
    std::vector<double> min_eigenvalues; // one per element
};

// Diagnostic check: element Hermiticity/positivity and completeness.
inline PovmValidity check_povm(const std::vector<ComplexMatrix> &elements) {
    PovmValidity report;
    if (elements.empty())
        throw std::invalid_argument("POVM must have at least one element");
    const int dim = elements.front().dim();
    ComplexMatrix sum(dim);
    for (const auto &e : elements) {
        if (e.dim() != dim)
            throw std::invalid_argument("POVM elements differ in dimension");
        if (!e.is_hermitian(1e-12))
            report.valid = false;
        const auto eig = hermitian_eigenvalues(e);
        report.min_eigenvalues.push_back(eig.front());
        if (eig.front() < -1e-10)
            report.valid = false;
        sum += e;
    }
    report.completeness_residual =
        sum.max_abs_diff(ComplexMatrix::identity(dim));
    if (report.completeness_residual > 1e-10)
        report.valid = false;
    return report;
}

// Positive-operator-valued measure; validated on construction.
class Povm {
  public:
    explicit Povm(std::vector<ComplexMatrix> elements)
        : elements_(std::move(elements)) {
        const auto report = check_povm(elements_);
        if (!report.valid)
            throw std::invalid_argument(
                "invalid POVM (completeness residual " +
                std::to_string(report.completeness_residual) + ")");
    }

    int size() const { return static_cast<int>(elements_.size()); }
    int dim() const { return elements_.front().dim(); }
    const ComplexMatrix &operator[](int i) const { return elements_.at(i); }
    const std::vector<ComplexMatrix> &elements() const { return elements_; }

  private:
    std::vector<ComplexMatrix> elements_;
};

inline PovmValidity check_povm(const Povm &p) {
    return check_povm(p.elements());
}

// ---------------------------------------------------------------------------
// Qubit states and measurement operators used by the protocol.
// ---------------------------------------------------------------------------

inline StateVector ket0() { return StateVector({1.0, 0.0}); }
inline StateVector ket1() { return StateVector({0.0, 1.0}); }
inline StateVector ket_plus() {
    const double s = 1.0 / std::sqrt(2.0);
    return StateVector({s, s});
}
inline StateVector ket_minus() {
    const double s = 1.0 / std::sqrt(2.0);
    return StateVector({s, -s});
}

inline StateVector ket(Prepared p) {
    switch (p) {
    case Prepared::Rho0:
        return ket0();
    case Prepared::Rho1:
        return ket1();
    case Prepared::RhoPlus:
        return ket_plus();
    default:
        return ket_minus();
    }
}

inline DensityMatrix density(Prepared p) {
    return DensityMatrix(ket(p).projector());
}

// Projector onto the outcome-m eigenspace of the basis operator
// (sigma3: |0><0| for m=+1, |1><1| for m=-1; sigma1: |+><+| / |-><-|).
inline ComplexMatrix outcome_projector(Basis basis, int m) {
    if (m != +1 && m != -1)
        throw std::invalid_argument("outcome must be +1 or -1");
    if (basis == Basis::Sigma3)
        return (m == +1 ? ket0() : ket1()).projector();
    return (m == +1 ? ket_plus() : ket_minus()).projector();
}

// sigma1 = |+><+| - |-><-|, sigma3 = |0><0| - |1><1|.
inline ComplexMatrix basis_operator(Basis basis) {
    return outcome_projector(basis, +1) - outcome_projector(basis, -1);
}

} // namespace qmath
} // namespace eavesim
