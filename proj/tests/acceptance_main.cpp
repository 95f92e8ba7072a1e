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

// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not calibrated.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "eavesim/detection.hpp"
#include "eavesim/infotheory.hpp"
#include "eavesim/protocol.hpp"

using namespace eavesim;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string &what) {
    if (!ok)
        throw Failure(what);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

const std::array<double, 11> kStrengthGrid = {
    0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};

qmath::ComplexMatrix conditional_probe(const eavesdropper::ProbeAttack &a,
                                       Basis basis, int m) {
    qmath::ComplexMatrix accum(4);
    double weight = 0.0;
    for (const Prepared prep : kAllPrepared) {
        const auto proj = qmath::tensor_product(
            qmath::outcome_projector(basis, m),
            qmath::ComplexMatrix::identity(4));
        const auto projected = proj * a.joint(prep) * proj;
        accum += Complex(0.25) * qmath::partial_trace_first(projected, 2);
        weight += 0.25 * projected.trace().real();
    }
    accum *= Complex(1.0 / weight);
    return accum;
}

// Receiver-side per-shot event table: no-announcement plus the sixteen
// (prepared, basis, a) compound events; used as the enumeration oracle.
infotheory::EventDistribution receiver_event_table(double p_a, double D) {
    struct Cell {
        Prepared prep;
        Basis basis;
        int a;
    };
    const std::vector<Cell> mu = {{Prepared::RhoMinus, Basis::Sigma1, 0},
                                  {Prepared::RhoPlus, Basis::Sigma1, 1},
                                  {Prepared::Rho1, Basis::Sigma3, 0},
                                  {Prepared::Rho0, Basis::Sigma3, 1}};
    const auto in_mu = [&](Prepared p, Basis b, int a) {
        for (const auto &c : mu)
            if (c.prep == p && c.basis == b && c.a == a)
                return true;
        return false;
    };
    infotheory::EventDistribution dist;
    dist.events.push_back({"none", 1.0 - p_a, 1.0 - p_a});
    for (const Prepared prep : kAllPrepared)
        for (const Basis basis : kAllBases)
            for (int a = 0; a <= 1; ++a) {
                const std::string label = to_string(prep) + "," +
                                          to_string(basis) +
                                          ",a=" + std::to_string(a);
                if (!protocol::matching_basis(prep, basis))
                    dist.events.push_back({label, p_a / 16.0, p_a / 16.0});
                else if (in_mu(prep, basis, a))
                    dist.events.push_back(
                        {label, p_a * D / 8.0, p_a * (1.0 - D) / 8.0});
                else
                    dist.events.push_back(
                        {label, p_a * (1.0 - D) / 8.0, p_a * D / 8.0});
            }
    dist.validate();
    return dist;
}

// --------------------------------------------------------------------------

std::string criterion_1_forwarded_marginals() {
    double worst = 0.0;
    for (const double d : kStrengthGrid) {
        const auto attack = eavesdropper::build_probe_attack(d);
        for (const Prepared prep : kAllPrepared) {
            const auto expected =
                channel::apply_symmetric_noise(qmath::density(prep), d);
            const double dev =
                attack.forwarded_state(prep).matrix().max_abs_diff(
                    expected.matrix());
            worst = std::max(worst, dev);
        }
    }
    require(worst < 1e-10, "forwarded marginal deviates by " + fmt(worst));
    return "max deviation " + fmt(worst);
}

std::string criterion_2_table4() {
    double worst = 0.0;
    for (const double d : kStrengthGrid) {
        const auto attack = eavesdropper::build_probe_attack(d);
        const double beta = 2.0 * std::sqrt(d * (1.0 - d));
        const double c2 = 0.5 * (1.0 + beta);
        const double s2 = 0.5 * (1.0 - beta);
        const std::array<double, 4> plus_col = {(1.0 - d) * c2,
                                                (1.0 - d) * s2, d * c2,
                                                d * s2};
        const std::array<double, 4> minus_col = {(1.0 - d) * s2,
                                                 (1.0 - d) * c2, d * s2,
                                                 d * c2};
        for (const Basis basis : kAllBases) {
            const auto &povm = attack.povm_for(basis);
            const auto probe_plus = conditional_probe(attack, basis, +1);
            const auto probe_minus = conditional_probe(attack, basis, -1);
            for (int i = 0; i < 4; ++i) {
                worst = std::max(
                    worst,
                    std::abs(qmath::real_trace_product(povm[i], probe_plus) -
                             plus_col[i]));
                worst = std::max(
                    worst,
                    std::abs(qmath::real_trace_product(povm[i], probe_minus) -
                             minus_col[i]));
            }
        }
    }
    require(worst < 1e-10, "outcome probability deviates by " + fmt(worst));
    return "max deviation " + fmt(worst);
}

std::string criterion_3_passive_eve() {
    const auto result = infotheory::mutual_info_be(50, 0.3, 0.0);
    require(std::abs(result.value) <= 1e-12,
            "I(B:E) at zero strength is " + fmt(result.value));
    return "I(B:E) = " + fmt(result.value);
}

std::string criterion_4_endpoints() {
    double worst_half = 0.0;
    double worst_zero = 0.0;
    for (std::int64_t k = 1; k <= 7; ++k) {
        worst_half = std::max(
            worst_half, std::abs(infotheory::mutual_info_be_k(k, 0.5) - 1.0));
        worst_zero =
            std::max(worst_zero, infotheory::mutual_info_be_k(k, 0.0));
    }
    require(worst_half < 1e-9, "I_k(1/2) misses 1 by " + fmt(worst_half));
    require(worst_zero <= 1e-12, "I_k(0) reaches " + fmt(worst_zero));
    return "1-I_k(1/2) <= " + fmt(worst_half) + ", I_k(0) <= " +
           fmt(worst_zero);
}

std::string criterion_5_formula_vs_oracle() {
    double worst = 0.0;
    for (int k = 1; k <= 5; ++k)
        for (double d = 0.05; d < 0.46; d += 0.05) {
            const double oracle =
                infotheory::brute_force_mi(infotheory::eve_event_table(d), k);
            worst = std::max(
                worst,
                std::abs(infotheory::mutual_info_be_k(k, d) - oracle));
        }
    require(worst < 1e-9, "I_k formula deviates by " + fmt(worst));

    double worst_bc = 0.0;
    for (std::int64_t n : {1, 2, 3})
        for (double p_a : {0.5, 1.0})
            for (double D : {0.0, 0.1, 0.25, 0.4, 0.5}) {
                const double oracle = infotheory::brute_force_mi(
                    receiver_event_table(p_a, D), static_cast<int>(n));
                worst_bc = std::max(
                    worst_bc,
                    std::abs(infotheory::mutual_info_bc(n, p_a, D).value -
                             oracle));
            }
    require(worst_bc < 1e-9, "I(B:C) formula deviates by " + fmt(worst_bc));
    return "eavesdropper dev " + fmt(worst) + ", receiver dev " +
           fmt(worst_bc);
}

std::string criterion_6_curve_properties() {
    const std::array<std::int64_t, 4> ks = {1, 3, 5, 7};
    std::array<double, 4> prev{};
    for (int i = 0; i <= 20; ++i) {
        const double d = std::min(0.025 * i, 0.5);
        std::array<double, 4> row{};
        for (std::size_t c = 0; c < ks.size(); ++c)
            row[c] = infotheory::mutual_info_be_k(ks[c], d);
        for (std::size_t c = 0; c < ks.size(); ++c) {
            if (i > 0)
                require(row[c] >= prev[c] - 1e-12,
                        "curve I_" + std::to_string(ks[c]) +
                            " decreases at d = " + fmt(d));
            if (c > 0)
                require(row[c - 1] <= row[c] + 1e-12,
                        "curve ordering violated at d = " + fmt(d));
        }
        if (i == 0)
            for (const double v : row)
                require(v <= 1e-12, "nonzero left endpoint " + fmt(v));
        if (i == 20)
            for (const double v : row)
                require(std::abs(v - 1.0) < 1e-9,
                        "right endpoint misses 1 by " + fmt(v - 1.0));
        prev = row;
    }
    return "monotone, ordered, endpoints 0 and 1";
}

std::string criterion_7_montecarlo_attack() {
    const double d = 0.2;
    const auto attack = eavesdropper::build_probe_attack(d);
    protocol::ProtocolConfig config;
    config.n_shots = 210000;
    config.p_announce = 1.0;
    config.seed = 20260810;
    Rng rng(config.seed);
    const auto t = protocol::run_protocol(config, 0, attack, rng);

    std::int64_t matched = 0;
    std::int64_t mismatched = 0;
    std::array<std::int64_t, 4> class_counts{};
    for (const auto &shot : t.shots) {
        if (protocol::matching_basis(shot.prepared,
                                     shot.announcement.basis)) {
            ++matched;
            mismatched +=
                shot.alice_m != protocol::ideal_outcome(shot.prepared);
        }
        const auto cls = eavesdropper::classify_event(
            shot.announcement.basis, shot.announcement.value,
            *shot.eve_outcome);
        ++class_counts[eavesdropper::index_of(cls) - 1];
    }
    require(matched >= 100000,
            "only " + std::to_string(matched) + " matched-basis shots");
    const double freq = mismatched / static_cast<double>(matched);
    const double sigma_mismatch =
        std::sqrt(d * (1.0 - d) / static_cast<double>(matched));
    require(std::abs(freq - d) < 4.0 * sigma_mismatch,
            "mismatch frequency " + fmt(freq) + " vs " + fmt(d));

    const auto p = eavesdropper::event_probabilities(d);
    const auto total = static_cast<double>(t.shots.size());
    for (int cls = 0; cls < 4; ++cls) {
        const double expect = p[cls];
        const double obs = class_counts[cls] / total;
        const double sigma = std::sqrt(expect * (1.0 - expect) / total);
        require(std::abs(obs - expect) < 4.0 * sigma,
                "class S" + std::to_string(cls + 1) + " frequency " +
                    fmt(obs) + " vs " + fmt(expect));
    }
    return "mismatch " + fmt(freq) + ", classes within 4 sigma";
}

std::string criterion_8_plugin_mi() {
    const double d = 0.25;
    const auto attack = eavesdropper::build_probe_attack(d);
    std::vector<std::int64_t> counts0(16, 0);
    std::vector<std::int64_t> counts1(16, 0);
    for (int b : {0, 1}) {
        protocol::ProtocolConfig config;
        config.n_shots = 500000;
        config.p_announce = 1.0;
        config.seed = 31337 + b;
        Rng rng(config.seed);
        const auto t = protocol::run_protocol(config, b, attack, rng);
        auto &counts = b == 0 ? counts0 : counts1;
        for (const auto &shot : t.shots) {
            const int cell =
                8 * (shot.announcement.basis == Basis::Sigma3 ? 1 : 0) +
                4 * shot.announcement.value + (*shot.eve_outcome - 1);
            ++counts[cell];
        }
    }
    const double estimate =
        infotheory::plugin_mi_estimate(counts0, counts1);
    const double analytic = infotheory::mutual_info_be_k(1, d);
    require(std::abs(estimate - analytic) < 0.01,
            "plug-in " + fmt(estimate) + " vs analytic " + fmt(analytic));
    return "plug-in " + fmt(estimate) + " vs analytic " + fmt(analytic);
}

std::string criterion_9_detection_coverage() {
    const double true_d = 0.1;
    const auto attack = eavesdropper::build_probe_attack(true_d);
    const auto prior = detection::uniform_prior(1e-4);
    int covered = 0;
    const int runs = 200;
    double tv = -1.0;
    for (int i = 0; i < runs; ++i) {
        protocol::ProtocolConfig config;
        config.n_shots = 10000;
        config.p_announce = 0.1;
        config.seed = 60000 + static_cast<std::uint64_t>(i);
        Rng rng(config.seed);
        const auto t = protocol::run_protocol(config, i % 2, attack, rng);
        const auto summary = detection::summarize_mismatches(t);
        const auto posterior = detection::bayesian_posterior(summary, prior);
        covered += detection::credible_bound(posterior, 0.95) > true_d;

        if (i == 0) {
            // Conjugate oracle: Beta(r+1, n-r+1) truncated to the grid.
            const double a = static_cast<double>(summary.r) + 1.0;
            const double b =
                static_cast<double>(summary.n - summary.r) + 1.0;
            std::vector<double> reference(posterior.grid.size(), 0.0);
            double total = 0.0;
            for (std::size_t g = 1; g < posterior.grid.size(); ++g) {
                const double x = posterior.grid[g];
                reference[g] = std::exp((a - 1.0) * std::log(x) +
                                        (b - 1.0) * std::log1p(-x) -
                                        (std::lgamma(a) + std::lgamma(b) -
                                         std::lgamma(a + b)));
                total += reference[g];
            }
            tv = 0.0;
            for (std::size_t g = 0; g < reference.size(); ++g)
                tv += std::abs(reference[g] / total - posterior.weights[g]);
            tv *= 0.5;
        }
    }
    const double fraction = covered / static_cast<double>(runs);
    require(fraction >= 0.90 && fraction <= 1.0,
            "coverage fraction " + fmt(fraction));
    require(tv >= 0.0 && tv < 1e-3, "posterior TV vs conjugate " + fmt(tv));
    return "coverage " + fmt(fraction) + ", TV " + fmt(tv);
}

std::string criterion_10_decoding_sanity() {
    int decoded_runs = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        for (int b : {0, 1}) {
            protocol::ProtocolConfig config;
            config.n_shots = 100;
            config.p_announce = 1.0;
            config.seed = 1000 * seed + static_cast<std::uint64_t>(b);
            Rng rng(config.seed);
            const auto t = protocol::run_protocol(config, b, std::nullopt,
                                                  rng);
            bool any_matched = false;
            for (const auto &shot : t.shots)
                any_matched |= protocol::bob_decode_shot(
                                   shot.prepared, shot.announcement)
                                   .has_value();
            if (!any_matched)
                continue; // probability 2^-100
            const auto decode = protocol::bob_aggregate_decode(t);
            require(decode.bit == b, "decoded wrong bit at seed " +
                                         std::to_string(config.seed));
            require(decode.confidence == 1.0,
                    "confidence " + fmt(decode.confidence) + " at seed " +
                        std::to_string(config.seed));
            ++decoded_runs;
        }
    }
    require(decoded_runs == 40, "matched announcements missing");
    return "40/40 runs decoded with confidence 1";
}

std::string criterion_11_typo_audits() {
    for (const double d : {0.05, 0.1, 0.2, 0.3, 0.4, 0.45}) {
        const auto attack = eavesdropper::build_probe_attack(d);
        const double o0011 =
            qmath::inner(attack.chi[0], attack.chi[3]).real();
        const double o0110 =
            qmath::inner(attack.chi[1], attack.chi[2]).real();
        const double corrected = (1.0 - o0011) / (2.0 - o0011 + o0110);
        require(std::abs(corrected - d) < 1e-12,
                "corrected overlap form gives " + fmt(corrected) + " at d " +
                    fmt(d));
        const double printed = (1.0 - o0011) / (1.0 - o0011 + o0110);
        require(std::abs(printed - 2.0 * d) < 1e-12,
                "one-denominator variant gives " + fmt(printed) + " at d " +
                    fmt(d));
    }
    // The information bound with the (1-d) radical reproduces the
    // discrimination-table information; the (1+d) variant has negative log
    // arguments past (sqrt(2)-1)/2.
    for (const double d : kStrengthGrid) {
        const double beta = 2.0 * std::sqrt(d * (1.0 - d));
        const double c2 = 0.5 * (1.0 + beta);
        const double s2 = 0.5 * (1.0 - beta);
        const double table_mi =
            infotheory::mi_kernel((1.0 - d) * c2, (1.0 - d) * s2) +
            infotheory::mi_kernel((1.0 - d) * s2, (1.0 - d) * c2) +
            infotheory::mi_kernel(d * c2, d * s2) +
            infotheory::mi_kernel(d * s2, d * c2);
        require(std::abs(infotheory::fuchs_bound(d) - table_mi) < 1e-10,
                "bound deviates from table information at d " + fmt(d));
    }
    const double threshold = 0.5 * (std::sqrt(2.0) - 1.0);
    for (const double d : {0.21, 0.3, 0.4, 0.5})
        require(1.0 - 2.0 * std::sqrt(d * (1.0 + d)) < 0.0,
                "plus-radical variant unexpectedly valid at d " + fmt(d));
    require(1.0 - 2.0 * std::sqrt(0.9 * threshold * (1.0 + 0.9 * threshold)) >
                0.0,
            "plus-radical variant invalid below the threshold");
    return "overlap forms and radical variants behave as documented";
}

} // namespace

int main() {
    using Criterion = std::function<std::string()>;
    const std::vector<std::pair<std::string, Criterion>> criteria = {
        {"channel-attack consistency", criterion_1_forwarded_marginals},
        {"discrimination-table reproduction", criterion_2_table4},
        {"passive eavesdropper information", criterion_3_passive_eve},
        {"information endpoints", criterion_4_endpoints},
        {"formula vs enumeration oracle", criterion_5_formula_vs_oracle},
        {"information-curve properties", criterion_6_curve_properties},
        {"Monte-Carlo attack statistics", criterion_7_montecarlo_attack},
        {"empirical vs analytic information", criterion_8_plugin_mi},
        {"detection coverage and conjugate posterior",
         criterion_9_detection_coverage},
        {"decoding sanity", criterion_10_decoding_sanity},
        {"documented-discrepancy audits", criterion_11_typo_audits},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = criteria[i].second();
        } catch (const std::exception &e) {
            ok = false;
            detail = e.what();
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << (i + 1)
                  << " (" << criteria[i].first << "): " << detail << " ["
                  << ms << " ms]\n";
        failures += !ok;
    }
    if (failures > 0)
        std::cout << failures << " criterion(s) failed\n";
    else
        std::cout << "all " << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
