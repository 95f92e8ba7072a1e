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
 * The optimal individual attack: a symmetric probe coupled to each particle
 * in transit, followed by a four-outcome POVM on the probe chosen after the
 * measurement basis is announced.
 *
 * Construction outline, for strength d in [0, 1/2] with
 * beta = 2*sqrt(d(1-d)):
 *
 *   - probe vectors over an orthonormal basis {eta0..eta3}:
 *       chi00 = eta0, chi01 = eta1,
 *       chi10 = (1-2d) eta1 + beta eta3,
 *       chi11 = (1-2d) eta0 + beta eta2;
 *     the +/- sector vectors follow by linearity of the coupling.
 *   - coupling U on particle x probe:
 *       |0>|psi> -> sqrt(1-d)|0>|chi00> + sqrt(d)|1>|chi01>
 *       |1>|psi> -> sqrt(d)|0>|chi10> + sqrt(1-d)|1>|chi11>
 *     with |psi> = eta0, completed to a full 8x8 unitary. Every input state
 *     is forwarded as (1-2d) rho + d I.
 *   - discrimination basis rotated by the angle gamma with
 *       cos^2 gamma = (1+beta)/2:
 *       eps1 = cos(g) eta0 - sin(g) eta2,  eps2 = sin(g) eta0 + cos(g) eta2,
 *       eps3 = cos(g) eta1 - sin(g) eta3,  eps4 = sin(g) eta1 + cos(g) eta3.
 *     The POVM used after a sigma3 announcement is {V E_i V^dag} with
 *     E_i = |eps_i><eps_i| and V the reflection
 *       V = (1-2d)(|eta1><eta1| - |eta3><eta3|)
 *           + beta(|eta1><eta3| + |eta3><eta1|)
 *     extended by the identity on span{eta0, eta2}; the sigma1 POVM is the
 *     transport of the sigma3 one through the unitary mapping the
 *     computational-sector probe vectors onto the +/- sector ones.
 *
 * Outcome probabilities against the conditional probe states are
 *   {(1-d)cos^2 g, (1-d)sin^2 g, d cos^2 g, d sin^2 g}
 * and their swaps; the event-set probabilities p1..p4 below follow.
 */

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "eavesim/qmath.hpp"
#include "eavesim/rng.hpp"

namespace eavesim::eavesdropper {

using qmath::ComplexMatrix;
using qmath::DensityMatrix;
using qmath::Povm;
using qmath::StateVector;

// Event classes over (basis, announced bit, outcome index); events in one
// class share their conditional probabilities given the message bit.
enum class EventSet { S1 = 1, S2 = 2, S3 = 3, S4 = 4 };

inline int index_of(EventSet s) { return static_cast<int>(s); }

/**
 * Precomputed attack of strength d. Immutable after construction and safe to
 * share across concurrent runs; per-shot sampling uses the caller's RNG.
 */
struct ProbeAttack {
    double d = 0.0;
    // chi00, chi01, chi10, chi11 over the computational sector.
    std::array<StateVector, 4> chi;
    // chi++, chi+-, chi-+, chi-- derived by linearity of the coupling.
    std::array<StateVector, 4> chi_pm;
    ComplexMatrix coupling;  // 8x8 unitary
    Povm povm_z;             // used when Alice announces sigma3
    Povm povm_x;             // used when Alice announces sigma1
    // Caches keyed by Prepared: joint post-coupling states and their
    // forwarded particle marginals.
    std::array<ComplexMatrix, 4> joint_states;
    std::array<DensityMatrix, 4> forwarded;

    const ComplexMatrix &joint(Prepared p) const {
        return joint_states[static_cast<int>(p)];
    }
    const DensityMatrix &forwarded_state(Prepared p) const {
        return forwarded[static_cast<int>(p)];
    }
    const Povm &povm_for(Basis basis) const {
        return basis == Basis::Sigma3 ? povm_z : povm_x;
    }
};

namespace detail {

inline StateVector eta(int i) { return StateVector::basis_state(4, i); }

inline StateVector combine4(Complex c0, Complex c1, Complex c2, Complex c3) {
    return StateVector({c0, c1, c2, c3});
}

inline std::array<Complex, 8> apply8(const ComplexMatrix &m,
                                     const std::array<Complex, 8> &v) {
    std::array<Complex, 8> out{};
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            out[r] += m(r, c) * v[c];
    return out;
}

// Orthonormal completion of the two coupling output columns; assigns the
// remaining six columns of U from Gram-Schmidt-reduced standard basis
// vectors. Only the defined subspace is ever exercised by the protocol.
inline ComplexMatrix complete_coupling(const std::array<Complex, 8> &out0,
                                       const std::array<Complex, 8> &out1) {
    std::array<std::array<Complex, 8>, 8> cols{};
    cols[0] = out0;
    cols[1] = out1;
    int have = 2;
    for (int cand = 0; cand < 8 && have < 8; ++cand) {
        std::array<Complex, 8> v{};
        v[cand] = 1.0;
        for (int o = 0; o < have; ++o) {
            Complex proj = 0.0;
            for (int i = 0; i < 8; ++i)
                proj += std::conj(cols[o][i]) * v[i];
            for (int i = 0; i < 8; ++i)
                v[i] -= proj * cols[o][i];
        }
        double n2 = 0.0;
        for (const auto &a : v)
            n2 += std::norm(a);
        if (n2 < 1e-6)
            continue;
        const double inv = 1.0 / std::sqrt(n2);
        for (auto &a : v)
            a *= inv;
        cols[have++] = v;
    }
    if (have != 8)
        throw std::runtime_error(
            "construction error: coupling completion failed");
    // Columns 0 and 1 are the images of inputs |0>|psi> and |1>|psi>, i.e.
    // composite input indices 0 and 4; completion vectors fill the rest.
    const std::array<int, 8> input_index = {0, 4, 1, 2, 3, 5, 6, 7};
    ComplexMatrix u(8);
    for (int c = 0; c < 8; ++c)
        for (int r = 0; r < 8; ++r)
            u(r, input_index[c]) = cols[c][r];
    return u;
}

} // namespace detail

/**
 * Conditional probabilities of the four event classes given the message bit:
 * {p1, p2, p3, p4} given b=0; given b=1 the pairs (1,2) and (3,4) swap.
 * Normalized so the four values sum to one.
 */
inline std::array<double, 4> event_probabilities(double d) {
    if (!(d >= 0.0 && d <= 0.5))
        throw std::invalid_argument("invalid strength: d = " +
                                    std::to_string(d) + " outside [0, 1/2]");
    const double beta = 2.0 * std::sqrt(d * (1.0 - d));
    std::array<double, 4> p = {
        0.5 * (1.0 - d) * (1.0 - beta),
        0.5 * (1.0 - d) * (1.0 + beta),
        0.5 * d * (1.0 - beta),
        0.5 * d * (1.0 + beta),
    };
    const double sum = p[0] + p[1] + p[2] + p[3];
    for (auto &v : p)
        v /= sum;
    return p;
}

/**
 * Builds the strength-d attack: probe vectors, the coupling unitary, and the
 * two announcement-keyed POVMs, plus the per-preparation joint/forwarded
 * caches. Throws on d outside [0, 1/2] or on any failed construction check.
 */
inline ProbeAttack build_probe_attack(double d) {
    using detail::eta;
    if (!(d >= 0.0 && d <= 0.5))
        throw std::invalid_argument("invalid strength: d = " +
                                    std::to_string(d) + " outside [0, 1/2]");

    const double alpha = 1.0 - 2.0 * d;
    const double beta = 2.0 * std::sqrt(d * (1.0 - d));
    const double sd = std::sqrt(d);
    const double s1d = std::sqrt(1.0 - d);

    const StateVector chi00 = eta(0);
    const StateVector chi01 = eta(1);
    const StateVector chi10 = detail::combine4(0.0, alpha, 0.0, beta);
    const StateVector chi11 = detail::combine4(alpha, 0.0, beta, 0.0);

    // Coupling outputs for inputs |0>|eta0> and |1>|eta0>; composite index
    // is particle*4 + probe.
    std::array<Complex, 8> out0{};
    std::array<Complex, 8> out1{};
    for (int q = 0; q < 4; ++q) {
        out0[q] = s1d * chi00[q];
        out0[4 + q] = sd * chi01[q];
        out1[q] = sd * chi10[q];
        out1[4 + q] = s1d * chi11[q];
    }
    ComplexMatrix coupling = detail::complete_coupling(out0, out1);
    if ((coupling.adjoint() * coupling)
            .max_abs_diff(ComplexMatrix::identity(8)) > 1e-10)
        throw std::runtime_error("construction error: coupling not unitary");

    // +/- sector probe vectors by linearity: apply the coupling to
    // |+->|psi> and read off the probe components of the |+-> branches,
    //   U|+>|psi> = sqrt(1-d)|+>|chi++> + sqrt(d)|->|chi+->
    //   U|->|psi> = sqrt(d)|+>|chi-+> + sqrt(1-d)|->|chi-->.
    // At d=0 the sqrt(d) branches vanish; chi+-/chi-+ are then fixed to
    // eta1 (any unit vector works there, the branch is never populated).
    std::array<StateVector, 4> chi_pm = {eta(0), eta(1), eta(1), eta(0)};
    {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        std::array<Complex, 8> in_plus{};
        std::array<Complex, 8> in_minus{};
        in_plus[0] = inv_sqrt2;
        in_plus[4] = inv_sqrt2;
        in_minus[0] = inv_sqrt2;
        in_minus[4] = -inv_sqrt2;
        const auto w = detail::apply8(coupling, in_plus);
        const auto v = detail::apply8(coupling, in_minus);
        const auto branch = [&](const std::array<Complex, 8> &full, int sign,
                                double amp) {
            std::vector<Complex> probe(4);
            for (int q = 0; q < 4; ++q)
                probe[q] = (full[q] + Complex(sign) * full[4 + q]) *
                           (inv_sqrt2 / amp);
            return StateVector(std::move(probe));
        };
        chi_pm[0] = branch(w, +1, s1d);
        chi_pm[3] = branch(v, -1, s1d);
        if (d > 0.0) {
            chi_pm[1] = branch(w, -1, sd);
            chi_pm[2] = branch(v, +1, sd);
        }
    }

    // Discrimination basis and the two POVMs.
    const double cg = std::sqrt(0.5 * (1.0 + beta));
    const double sg = std::sqrt(0.5 * (1.0 - beta));
    const std::array<StateVector, 4> eps = {
        detail::combine4(cg, 0.0, -sg, 0.0),
        detail::combine4(sg, 0.0, cg, 0.0),
        detail::combine4(0.0, cg, 0.0, -sg),
        detail::combine4(0.0, sg, 0.0, cg),
    };

    ComplexMatrix rot_v(4); // reflection on span{eta1, eta3}, identity else
    rot_v(0, 0) = 1.0;
    rot_v(2, 2) = 1.0;
    rot_v(1, 1) = alpha;
    rot_v(3, 3) = -alpha;
    rot_v(1, 3) = beta;
    rot_v(3, 1) = beta;

    std::vector<ComplexMatrix> ez;
    ez.reserve(4);
    for (const auto &e : eps)
        ez.push_back(rot_v * e.projector() * rot_v.adjoint());
    Povm povm_z{std::move(ez)};

    // Transport of the sigma3 construction onto the +/- sector: the unitary
    // T with T chi_ij = chi_pm[..] exists because the two vector families
    // share their Gram matrix. At d=0 the families coincide, T = identity.
    ComplexMatrix transport = ComplexMatrix::identity(4);
    if (d > 0.0) {
        ComplexMatrix x(4);
        ComplexMatrix y(4);
        const std::array<const StateVector *, 4> xs = {&chi00, &chi01, &chi10,
                                                       &chi11};
        for (int c = 0; c < 4; ++c)
            for (int r = 0; r < 4; ++r) {
                x(r, c) = (*xs[c])[r];
                y(r, c) = chi_pm[c][r];
            }
        transport = y * qmath::inverse(x);
        if ((transport.adjoint() * transport)
                .max_abs_diff(ComplexMatrix::identity(4)) > 1e-10)
            throw std::runtime_error(
                "construction error: sector transport not unitary");
    }
    std::vector<ComplexMatrix> ex;
    ex.reserve(4);
    for (int i = 0; i < 4; ++i)
        ex.push_back(transport * povm_z[i] * transport.adjoint());
    Povm povm_x{std::move(ex)};

    // Per-preparation caches.
    const StateVector psi = eta(0);
    const ComplexMatrix psi_proj = psi.projector();
    std::array<ComplexMatrix, 4> joints = {ComplexMatrix(8), ComplexMatrix(8),
                                           ComplexMatrix(8), ComplexMatrix(8)};
    std::vector<DensityMatrix> fwd;
    fwd.reserve(4);
    for (int i = 0; i < 4; ++i) {
        const Prepared p = kAllPrepared[i];
        const ComplexMatrix in =
            qmath::tensor_product(qmath::density(p).matrix(), psi_proj);
        joints[i] = coupling * in * coupling.adjoint();
        fwd.emplace_back(qmath::partial_trace_second(joints[i], 4));
    }

    return ProbeAttack{d,
                       {chi00, chi01, chi10, chi11},
                       chi_pm,
                       std::move(coupling),
                       std::move(povm_z),
                       std::move(povm_x),
                       std::move(joints),
                       {fwd[0], fwd[1], fwd[2], fwd[3]}};
}

/**
 * Couples the prepared particle to the probe. Returns the forwarded particle
 * state (equal to (1-2d) rho + d I) and the retained joint state.
 */
inline std::pair<DensityMatrix, ComplexMatrix>
eve_intercept(Prepared prepared, const ProbeAttack &attack) {
    return {attack.forwarded_state(prepared), attack.joint(prepared)};
}

/**
 * Measures the probe once Alice's basis and outcome are fixed: the joint
 * state is projected on Alice's outcome, the probe marginal is normalized,
 * and an outcome in 1..4 is sampled from the basis-matched POVM.
 *
 * Throws on a zero-probability projection (degenerate branch; such branches
 * occur only at the strength endpoints and are never sampled by the
 * simulator, which draws Alice's outcome from its true distribution).
 */
inline int eve_measure(const ComplexMatrix &joint, Basis alice_basis,
                       const ComplexMatrix &alice_outcome_projector,
                       const ProbeAttack &attack, Rng &rng) {
    if (joint.dim() != 8 || alice_outcome_projector.dim() != 2)
        throw std::invalid_argument("eve_measure: dimension mismatch");
    const ComplexMatrix proj = qmath::tensor_product(
        alice_outcome_projector, ComplexMatrix::identity(4));
    const ComplexMatrix projected = proj * joint * proj;
    const double weight = projected.trace().real();
    if (weight < 1e-14)
        throw std::runtime_error(
            "degenerate branch: Alice outcome has zero probability");
    ComplexMatrix probe = qmath::partial_trace_first(projected, 2);
    probe *= Complex(1.0 / weight);

    const Povm &povm = attack.povm_for(alice_basis);
    double cumulative = 0.0;
    const double u = rng.uniform();
    for (int i = 0; i < povm.size(); ++i) {
        cumulative += std::max(0.0, qmath::real_trace_product(povm[i], probe));
        if (u < cumulative)
            return i + 1;
    }
    return povm.size(); // guards the cumulative-roundoff edge
}

/**
 * Event-set classification of a bit-announcement compound event. The mapping
 * is the one under which class S_i occurs with probability p_i given b=0
 * (verified against the Monte-Carlo pipeline); it is identical for the two
 * bases by the symmetry of the probe.
 */
inline EventSet classify_event(Basis /*basis*/, int a, int outcome_index) {
    if (a != 0 && a != 1)
        throw std::invalid_argument("announced bit must be 0 or 1");
    if (outcome_index < 1 || outcome_index > 4)
        throw std::invalid_argument("outcome index must be in 1..4");
    if (a == 1) {
        static constexpr std::array<EventSet, 4> kMap = {
            EventSet::S1, EventSet::S2, EventSet::S3, EventSet::S4};
        return kMap[outcome_index - 1];
    }
    static constexpr std::array<EventSet, 4> kMap = {
        EventSet::S2, EventSet::S1, EventSet::S4, EventSet::S3};
    return kMap[outcome_index - 1];
}

} // namespace eavesim::eavesdropper
