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
 * Eavesdropper detection from result-announcement mismatches: frequentist
 * point estimate with an n-sigma bound, the induced information ceiling,
 * and a grid Bayesian posterior over the attack strength.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eavesim/channel.hpp"
#include "eavesim/infotheory.hpp"
#include "eavesim/protocol.hpp"

namespace eavesim::detection {

/**
 * Mismatch statistics of a transcript. r mismatches were observed among the
 * n matched-basis result-announcement shots (the checkable subset of the
 * result-announcements); k counts the bit-announcements.
 */
struct MismatchSummary {
    std::int64_t r = 0;
    std::int64_t n = 0;
    std::int64_t k = 0;

    double mean() const {
        return n > 0 ? static_cast<double>(r) / static_cast<double>(n) : 0.0;
    }
};

inline MismatchSummary summarize_mismatches(
    const protocol::Transcript &transcript) {
    MismatchSummary s;
    for (const auto &shot : transcript.shots) {
        if (shot.announcement.kind == protocol::AnnouncementKind::Bit) {
            ++s.k;
            continue;
        }
        if (!protocol::matching_basis(shot.prepared,
                                      shot.announcement.basis))
            continue;
        ++s.n;
        if (shot.announcement.value != protocol::ideal_outcome(shot.prepared))
            ++s.r;
    }
    return s;
}

/**
 * d_mean + num_sigmas * sqrt(d_mean (1 - d_mean) / n), capped at 1/2.
 * Requires n >= 30 so the normal approximation is meaningful; below that,
 * use the Bayesian path.
 */
inline double frequentist_bound(const MismatchSummary &summary,
                                double num_sigmas) {
    if (summary.n < 30)
        throw std::invalid_argument(
            "insufficient data: need at least 30 checkable "
            "result-announcements for the frequentist bound");
    if (summary.r < 0 || summary.r > summary.n)
        throw std::invalid_argument("mismatch count outside [0, n]");
    const double mean = summary.mean();
    const double se =
        std::sqrt(mean * (1.0 - mean) / static_cast<double>(summary.n));
    return std::min(mean + num_sigmas * se, 0.5);
}

// Ceiling on what any eavesdropper learned from k bit-announcements given
// that their strength is at most d_bound.
inline double info_ceiling(double d_bound, std::int64_t k) {
    if (!(d_bound >= 0.0 && d_bound <= 0.5))
        throw std::invalid_argument("d_bound must lie in [0, 1/2]");
    return infotheory::mutual_info_be_k(k, d_bound);
}

// Discretized probability density over attack strength d in [0, 1/2].
struct Posterior {
    std::vector<double> grid;    // strictly increasing
    std::vector<double> weights; // nonnegative, summing to one

    void validate() const {
        if (grid.size() != weights.size() || grid.empty())
            throw std::invalid_argument("posterior grid/weights mismatch");
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (i > 0 && grid[i] <= grid[i - 1])
                throw std::invalid_argument(
                    "posterior grid must be strictly increasing");
            if (weights[i] < 0.0)
                throw std::invalid_argument("posterior weight is negative");
            sum += weights[i];
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("posterior weights must sum to one");
    }
};

inline Posterior uniform_prior(double grid_step = 1e-4) {
    if (!(grid_step > 0.0 && grid_step <= 0.5))
        throw std::invalid_argument("grid step must lie in (0, 1/2]");
    const auto points = static_cast<std::size_t>(std::llround(0.5 / grid_step)) + 1;
    Posterior p;
    p.grid.resize(points);
    p.weights.assign(points, 1.0 / static_cast<double>(points));
    for (std::size_t i = 0; i < points; ++i)
        p.grid[i] = static_cast<double>(i) * grid_step;
    p.grid.back() = 0.5;
    return p;
}

/**
 * Pointwise multiplies the prior by the binomial mismatch likelihood
 * d^r (1-d)^(n-r) (in log space) and renormalizes. A nonzero apparatus
 * mismatch enters through the composed effective probability, so the
 * posterior is over the eavesdropper's strength alone.
 */
inline Posterior bayesian_posterior(const MismatchSummary &summary,
                                    const Posterior &prior,
                                    double apparatus_mismatch = 0.0) {
    prior.validate();
    if (summary.r < 0 || summary.r > summary.n)
        throw std::invalid_argument("mismatch count outside [0, n]");
    const double r = static_cast<double>(summary.r);
    const double miss = static_cast<double>(summary.n - summary.r);
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> lw(prior.grid.size(), neg_inf);
    double max_lw = neg_inf;
    for (std::size_t i = 0; i < prior.grid.size(); ++i) {
        if (prior.weights[i] <= 0.0)
            continue;
        const double eff =
            channel::compose_mismatch(apparatus_mismatch, prior.grid[i]);
        double l = std::log(prior.weights[i]);
        if (summary.r > 0)
            l += eff > 0.0 ? r * std::log(eff) : neg_inf;
        if (summary.n - summary.r > 0)
            l += eff < 1.0 ? miss * std::log1p(-eff) : neg_inf;
        lw[i] = l;
        max_lw = std::max(max_lw, l);
    }
    if (max_lw == neg_inf)
        throw std::runtime_error(
            "numerical underflow: posterior carries no mass");
    Posterior out;
    out.grid = prior.grid;
    out.weights.resize(lw.size());
    double total = 0.0;
    for (std::size_t i = 0; i < lw.size(); ++i) {
        out.weights[i] = lw[i] == neg_inf ? 0.0 : std::exp(lw[i] - max_lw);
        total += out.weights[i];
    }
    for (auto &w : out.weights)
        w /= total;
    return out;
}

// Smallest grid value whose cumulative posterior reaches the given mass.
inline double credible_bound(const Posterior &posterior, double mass) {
    posterior.validate();
    if (!(mass > 0.0 && mass < 1.0))
        throw std::invalid_argument("credible mass must lie in (0, 1)");
    double cumulative = 0.0;
    for (std::size_t i = 0; i < posterior.grid.size(); ++i) {
        cumulative += posterior.weights[i];
        if (cumulative >= mass)
            return posterior.grid[i];
    }
    return posterior.grid.back();
}

struct DetectionOptions {
    double num_sigmas = 2.0;
    double credible_mass = 0.95;
    double grid_step = 1e-4;
};

struct DetectionReport {
    std::int64_t r = 0;
    std::int64_t n = 0;
    std::int64_t k = 0;
    double d_mean = 0.0;
    // Absent when n < 30 (frequentist path not applicable).
    std::optional<double> d_bound_2sigma;
    std::optional<double> info_ceiling_bits;
    double d_hat_95 = 0.0;
    double info_ceiling_bayes_bits = 0.0;
    std::string prior = "uniform";
    double grid_step = 1e-4;
};

inline DetectionReport build_detection_report(
    const protocol::Transcript &transcript,
    const DetectionOptions &options = {}) {
    const MismatchSummary summary = summarize_mismatches(transcript);
    DetectionReport report;
    report.r = summary.r;
    report.n = summary.n;
    report.k = summary.k;
    report.d_mean = summary.mean();
    report.grid_step = options.grid_step;
    if (summary.n >= 30) {
        report.d_bound_2sigma = frequentist_bound(summary, options.num_sigmas);
        report.info_ceiling_bits =
            info_ceiling(*report.d_bound_2sigma, summary.k);
    }
    const double apparatus_mismatch =
        channel::mismatch_probability(transcript.config.apparatus);
    const Posterior posterior = bayesian_posterior(
        summary, uniform_prior(options.grid_step), apparatus_mismatch);
    report.d_hat_95 = credible_bound(posterior, options.credible_mass);
    report.info_ceiling_bayes_bits = info_ceiling(report.d_hat_95, summary.k);
    return report;
}

} // namespace eavesim::detection
