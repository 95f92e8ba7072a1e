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
 * The particle-transmission channel: per-outcome apparatus probabilities,
 * the symmetric depolarizing map rho -> (1-2D)rho + D*I, and composition of
 * independent depolarizing strengths.
 */

#pragma once

#include <stdexcept>
#include <string>

#include "eavesim/qmath.hpp"

namespace eavesim::channel {

using qmath::ComplexMatrix;
using qmath::DensityMatrix;

/**
 * Apparatus noise parameters. d1/d3 are the mismatch probabilities on
 * matched-basis shots (sigma1/sigma3 respectively); d_plus0/d_0plus are the
 * cross-basis outcome probabilities, 1/2 for a calibrated apparatus.
 */
struct ChannelParams {
    double d1 = 0.0;
    double d3 = 0.0;
    double d_plus0 = 0.5;
    double d_0plus = 0.5;

    bool symmetric() const {
        return d_plus0 == 0.5 && d_0plus == 0.5 && d1 == d3;
    }

    static ChannelParams symmetric_noise(double mismatch) {
        return ChannelParams{mismatch, mismatch, 0.5, 0.5};
    }

    static ChannelParams ideal() { return symmetric_noise(0.0); }

    void validate() const {
        for (double p : {d1, d3, d_plus0, d_0plus})
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument(
                    "channel parameter outside [0,1]: " + std::to_string(p));
    }
};

// rho -> (1-2d)rho + d*I on a qubit; d in [0, 1/2].
inline DensityMatrix apply_symmetric_noise(const DensityMatrix &rho,
                                           double d) {
    if (!(d >= 0.0 && d <= 0.5))
        throw std::invalid_argument("invalid strength: depolarizing d = " +
                                    std::to_string(d) +
                                    " outside [0, 1/2]");
    if (rho.dim() != 2)
        throw std::invalid_argument("symmetric noise acts on qubits only");
    ComplexMatrix out = Complex(1.0 - 2.0 * d) * rho.matrix();
    out += Complex(d) * ComplexMatrix::identity(2);
    return DensityMatrix(out);
}

// Same map applied to the particle half of a particle(2) x probe joint state.
inline ComplexMatrix apply_symmetric_noise_to_particle(
    const ComplexMatrix &joint, double d) {
    if (!(d >= 0.0 && d <= 0.5))
        throw std::invalid_argument("invalid strength: depolarizing d = " +
                                    std::to_string(d) +
                                    " outside [0, 1/2]");
    const ComplexMatrix probe_marginal = qmath::partial_trace_first(joint, 2);
    ComplexMatrix out = Complex(1.0 - 2.0 * d) * joint;
    out += Complex(d) *
           qmath::tensor_product(ComplexMatrix::identity(2), probe_marginal);
    return out;
}

/**
 * Probability that Alice's measurement in `basis` yields outcome m for the
 * given prepared state. Matched-basis entries carry the mismatch
 * probabilities d1/d3; cross-basis entries carry d_plus0/d_0plus. The two m
 * values sum to one exactly as computed.
 */
inline double outcome_probability(const ChannelParams &params, Basis basis,
                                  Prepared prepared, int m) {
    if (m != +1 && m != -1)
        throw std::invalid_argument("outcome must be +1 or -1");
    params.validate();
    const bool matched = (basis == Basis::Sigma1 &&
                          (prepared == Prepared::RhoPlus ||
                           prepared == Prepared::RhoMinus)) ||
                         (basis == Basis::Sigma3 &&
                          (prepared == Prepared::Rho0 ||
                           prepared == Prepared::Rho1));
    if (matched) {
        // Ideal outcome +1 for rho0/rho+, -1 for rho1/rho-; a contradicting
        // outcome is a mismatch and carries d1 (sigma1) or d3 (sigma3).
        const double mismatch =
            basis == Basis::Sigma1 ? params.d1 : params.d3;
        const int ideal = (prepared == Prepared::Rho0 ||
                           prepared == Prepared::RhoPlus)
                              ? +1
                              : -1;
        return m == ideal ? 1.0 - mismatch : mismatch;
    }
    // Cross-basis rows: d_plus0 is the +1 probability when rho0 meets
    // sigma1, d_0plus when rho+ meets sigma3; the partner state flips it.
    const double base =
        basis == Basis::Sigma1 ? params.d_plus0 : params.d_0plus;
    const int base_outcome = (prepared == Prepared::Rho0 ||
                              prepared == Prepared::RhoPlus)
                                 ? +1
                                 : -1;
    return m == base_outcome ? base : 1.0 - base;
}

// The single mismatch probability D of a calibrated (symmetric) apparatus.
inline double mismatch_probability(const ChannelParams &params) {
    if (!params.symmetric())
        throw std::invalid_argument(
            "calibration required: mismatch probability is defined only for "
            "a symmetric channel (d_plus0 = d_0plus = 1/2, d1 = d3)");
    return params.d1;
}

// Strength of two independent depolarizing maps applied in sequence:
// (1 - 2*total) = (1 - 2a)(1 - 2b).
inline double compose_mismatch(double a, double b) {
    for (double p : {a, b})
        if (!(p >= 0.0 && p <= 0.5))
            throw std::invalid_argument(
                "invalid strength: mismatch probability outside [0, 1/2]");
    return 0.5 * (1.0 - (1.0 - 2.0 * a) * (1.0 - 2.0 * b));
}

} // namespace eavesim::channel
