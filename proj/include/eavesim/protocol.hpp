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
 * The shot routine and transcript bookkeeping: Bob prepares one of four
 * states uniformly, Alice measures in a random basis and announces either a
 * blinded message bit a = (b + (1-m)/2) mod 2 or her raw outcome m, and Bob
 * decodes from matched-basis bit-announcements.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eavesim/channel.hpp"
#include "eavesim/eavesdropper.hpp"
#include "eavesim/qmath.hpp"
#include "eavesim/rng.hpp"

namespace eavesim::protocol {

using qmath::DensityMatrix;

struct ProtocolConfig {
    std::int64_t n_shots = 0;
    double p_announce = 0.0;
    channel::ChannelParams apparatus = channel::ChannelParams::ideal();
    std::uint64_t seed = 0;

    void validate() const {
        if (n_shots < 1)
            throw std::invalid_argument("n_shots must be at least 1");
        if (!(p_announce >= 0.0 && p_announce <= 1.0))
            throw std::invalid_argument("p_announce must lie in [0,1]");
        apparatus.validate();
    }
};

enum class AnnouncementKind { Bit, Result };

// Alice's public per-shot announcement: the measurement basis plus either
// the blinded bit a (kind Bit) or the raw outcome m (kind Result).
struct Announcement {
    Basis basis = Basis::Sigma3;
    AnnouncementKind kind = AnnouncementKind::Result;
    int value = 0; // a in {0,1} for Bit, m in {+1,-1} for Result

    static Announcement bit(Basis basis, int a) {
        if (a != 0 && a != 1)
            throw std::invalid_argument("announced bit must be 0 or 1");
        return Announcement{basis, AnnouncementKind::Bit, a};
    }
    static Announcement result(Basis basis, int m) {
        if (m != +1 && m != -1)
            throw std::invalid_argument("announced outcome must be +1 or -1");
        return Announcement{basis, AnnouncementKind::Result, m};
    }
};

struct ShotRecord {
    std::int64_t index = 0;
    Prepared prepared = Prepared::Rho0;    // Bob-private
    Announcement announcement;
    int alice_m = 0;                       // Alice-private, kept for checks
    std::optional<int> eve_outcome;        // Eve-private POVM index, 1..4
};

struct Transcript {
    ProtocolConfig config;
    int message_bit = 0;
    std::optional<double> attack_strength;
    std::vector<ShotRecord> shots;
};

// Bob's prepared state is an eigenstate of the announced operator.
inline bool matching_basis(Prepared prepared, Basis basis) {
    if (basis == Basis::Sigma3)
        return prepared == Prepared::Rho0 || prepared == Prepared::Rho1;
    return prepared == Prepared::RhoPlus || prepared == Prepared::RhoMinus;
}

// Noise-free outcome for a matched-basis measurement of the prepared state.
inline int ideal_outcome(Prepared prepared) {
    return (prepared == Prepared::Rho0 || prepared == Prepared::RhoPlus) ? +1
                                                                         : -1;
}

inline Prepared bob_prepare(Rng &rng) {
    return kAllPrepared[rng.uniform_index(4)];
}

// Basis uniform over {sigma1, sigma3}; outcome sampled by the Born rule on
// the +1 eigenprojector of the chosen operator. Draw order: basis, outcome.
inline std::pair<Basis, int> alice_measure(const DensityMatrix &arriving,
                                           Rng &rng) {
    const Basis basis = kAllBases[rng.uniform_index(2)];
    const double p_plus =
        qmath::born_probability(arriving, qmath::outcome_projector(basis, +1));
    const int m = rng.uniform() < p_plus ? +1 : -1;
    return {basis, m};
}

// a = (b + (1-m)/2) mod 2
inline int blinded_bit(int b, int m) { return (b + (1 - m) / 2) % 2; }

inline Announcement alice_announce(int b, int m, Basis basis,
                                   double p_announce, Rng &rng) {
    if (m != +1 && m != -1)
        throw std::invalid_argument("outcome must be +1 or -1");
    if (b != 0 && b != 1)
        throw std::invalid_argument("message bit must be 0 or 1");
    if (rng.bernoulli(p_announce))
        return Announcement::bit(basis, blinded_bit(b, m));
    return Announcement::result(basis, m);
}

/**
 * Per-shot decode: on a matched-basis bit-announcement, inverts the blinding
 * with Bob's conjectured outcome (the ideal one for his prepared state);
 * returns nothing otherwise.
 */
inline std::optional<int> bob_decode_shot(Prepared prepared,
                                          const Announcement &announcement) {
    if (announcement.kind != AnnouncementKind::Bit)
        return std::nullopt;
    if (!matching_basis(prepared, announcement.basis))
        return std::nullopt;
    return blinded_bit(announcement.value, ideal_outcome(prepared));
}

struct DecodeResult {
    int bit = 0;
    double confidence = 0.5; // posterior probability of the estimate
};

/**
 * Exact Bayesian aggregation of the per-shot decodes under an assumed
 * matched-basis mismatch probability: shots decoding to b carry likelihood
 * (1 - assumed) for that bit and `assumed` for the other; unmatched or
 * result-announcement shots carry none. Ties break toward 0.
 */
inline DecodeResult bob_aggregate_decode(const Transcript &transcript,
                                         double assumed_mismatch) {
    if (transcript.shots.empty())
        throw std::invalid_argument("transcript has no shots");
    if (!(assumed_mismatch >= 0.0 && assumed_mismatch <= 0.5))
        throw std::invalid_argument(
            "assumed mismatch probability outside [0, 1/2]");
    std::int64_t votes0 = 0;
    std::int64_t votes1 = 0;
    for (const auto &shot : transcript.shots) {
        const auto decoded =
            bob_decode_shot(shot.prepared, shot.announcement);
        if (!decoded)
            continue;
        (*decoded == 0 ? votes0 : votes1) += 1;
    }
    if (votes0 == 0 && votes1 == 0)
        return DecodeResult{0, 0.5};
    if (assumed_mismatch == 0.0) {
        if (votes0 > 0 && votes1 > 0)
            return DecodeResult{0, 0.5}; // contradicts the noiseless model
        return votes1 > 0 ? DecodeResult{1, 1.0} : DecodeResult{0, 1.0};
    }
    // log odds of b=1 against b=0
    const double llr = static_cast<double>(votes1 - votes0) *
                       (std::log1p(-assumed_mismatch) -
                        std::log(assumed_mismatch));
    const double p_max = 1.0 / (1.0 + std::exp(-std::abs(llr)));
    if (llr > 0.0)
        return DecodeResult{1, p_max};
    return DecodeResult{0, llr == 0.0 ? 0.5 : p_max};
}

// Aggregation with the configured apparatus mismatch as the channel model.
inline DecodeResult bob_aggregate_decode(const Transcript &transcript) {
    return bob_aggregate_decode(
        transcript, channel::mismatch_probability(transcript.config.apparatus));
}

/**
 * Runs the N-shot routine. Per shot the generator is consumed in a fixed
 * order: Bob's preparation, Alice's basis, Alice's Born outcome, the
 * announcement-type draw, and (bit-announcement shots under attack only)
 * Eve's POVM outcome. With an attack present each particle is routed
 * through the probe coupling before Alice, and Eve measures once the basis
 * is public. Requires a symmetric apparatus; general Table-style parameters
 * are analysis-only and have no quantum realization compatible with the
 * attack path.
 */
inline Transcript
run_protocol(const ProtocolConfig &config, int b,
             const std::optional<eavesdropper::ProbeAttack> &attack,
             Rng &rng) {
    config.validate();
    if (b != 0 && b != 1)
        throw std::invalid_argument("message bit must be 0 or 1");
    if (!config.apparatus.symmetric())
        throw std::invalid_argument(
            "calibration required: the simulator models apparatus noise as a "
            "symmetric channel (d_plus0 = d_0plus = 1/2, d1 = d3)");
    const double apparatus_d = channel::mismatch_probability(config.apparatus);
    if (apparatus_d > 0.5)
        throw std::invalid_argument(
            "apparatus mismatch probability must lie in [0, 1/2]");

    // Per-preparation send states, fixed for the whole run.
    std::vector<DensityMatrix> forwarded;
    std::vector<qmath::ComplexMatrix> joints;
    for (const Prepared p : kAllPrepared) {
        if (attack) {
            auto [fwd, joint] = eavesdropper::eve_intercept(p, *attack);
            if (apparatus_d > 0.0) {
                joint = channel::apply_symmetric_noise_to_particle(
                    joint, apparatus_d);
                fwd = DensityMatrix(qmath::partial_trace_second(joint, 4));
            }
            forwarded.push_back(std::move(fwd));
            joints.push_back(std::move(joint));
        } else {
            forwarded.push_back(
                channel::apply_symmetric_noise(qmath::density(p),
                                               apparatus_d));
        }
    }

    Transcript transcript;
    transcript.config = config;
    transcript.message_bit = b;
    if (attack)
        transcript.attack_strength = attack->d;
    transcript.shots.reserve(static_cast<std::size_t>(config.n_shots));

    for (std::int64_t i = 0; i < config.n_shots; ++i) {
        const Prepared prepared = bob_prepare(rng);
        const int pi = static_cast<int>(prepared);
        const auto [basis, m] = alice_measure(forwarded[pi], rng);
        const Announcement ann =
            alice_announce(b, m, basis, config.p_announce, rng);
        std::optional<int> eve_outcome;
        if (attack && ann.kind == AnnouncementKind::Bit)
            eve_outcome = eavesdropper::eve_measure(
                joints[pi], basis, qmath::outcome_projector(basis, m),
                *attack, rng);
        transcript.shots.push_back(
            ShotRecord{i, prepared, ann, m, eve_outcome});
    }
    return transcript;
}

} // namespace eavesim::protocol
