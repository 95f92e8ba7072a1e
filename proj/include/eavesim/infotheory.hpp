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
 * Analytic mutual-information curves for the legitimate receiver and the
 * eavesdropper, plus an independent brute-force enumeration oracle and an
 * empirical plug-in estimator. All values are in bits (log base 2) with the
 * 0*log(0) = 0 convention applied termwise; combinatorial coefficients are
 * evaluated in log space so shot counts up to several hundred are exact to
 * double precision.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "eavesim/eavesdropper.hpp"

namespace eavesim::infotheory {

inline constexpr double kLn2 = 0.6931471805599453;

// x*log2(x), zero at zero.
inline double xlg2(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

/**
 * Per-outcome mutual-information contribution for an equiprobable binary
 * source: 1/2 [p0 lg p0 + p1 lg p1] - pbar lg pbar with pbar = (p0+p1)/2.
 * Summed over a conditional distribution's outcomes this is exactly the
 * mutual information; it is positively homogeneous, so shared constant
 * factors (counts, uniform marginals) can be folded into the arguments.
 */
inline double mi_kernel(double p0, double p1) {
    return 0.5 * (xlg2(p0) + xlg2(p1)) - xlg2(0.5 * (p0 + p1));
}

// mi_kernel(e^l0, e^l1), safe for -infinity inputs.
inline double mi_kernel_log(double l0, double l1) {
    const double a = std::exp(l0);
    const double b = std::exp(l1);
    if (a == 0.0 && b == 0.0)
        return 0.0;
    const double xa = a > 0.0 ? a * l0 : 0.0;
    const double xb = b > 0.0 ? b * l1 : 0.0;
    const double m = std::max(l0, l1);
    const double lmid =
        m + std::log(0.5 * (std::exp(l0 - m) + std::exp(l1 - m)));
    return (0.5 * (xa + xb) - 0.5 * (a + b) * lmid) / kLn2;
}

namespace detail {

inline double log_factorial(std::int64_t n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

inline double log_binomial(std::int64_t n, std::int64_t k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// Clamp the tiny negative values roundoff can produce; anything materially
// negative is a logic error upstream.
inline double clamp_mi(double v) {
    if (v < 0.0) {
        if (v < -1e-9)
            throw std::runtime_error(
                "mutual information evaluated materially negative: " +
                std::to_string(v));
        return 0.0;
    }
    return v;
}

} // namespace detail

struct MiResult {
    double value = 0.0;              // bits
    std::int64_t terms_evaluated = 0;
    double truncation_mass = 0.0;    // skipped announcement-count tail mass
};

// Binomial pmf for the number of bit-announcements in N shots.
inline double prob_k(std::int64_t n, double p_a, std::int64_t k) {
    if (k < 0 || k > n)
        throw std::invalid_argument("invalid count: k must lie in [0, N]");
    if (!(p_a >= 0.0 && p_a <= 1.0))
        throw std::invalid_argument("p_a must lie in [0, 1]");
    if (p_a == 0.0)
        return k == 0 ? 1.0 : 0.0;
    if (p_a == 1.0)
        return k == n ? 1.0 : 0.0;
    const double lp = detail::log_binomial(n, k) +
                      static_cast<double>(k) * std::log(p_a) +
                      static_cast<double>(n - k) * std::log1p(-p_a);
    return std::exp(lp);
}

namespace detail {

// Smallest window of k values around the pmf mode holding at least
// 1 - 1e-9 of the mass. Returns {lo, hi, skipped mass}.
struct KWindow {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    double truncation_mass = 0.0;
};

inline KWindow prob_k_window(std::int64_t n, double p_a) {
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
    std::int64_t mode = 0;
    for (std::int64_t k = 0; k <= n; ++k) {
        pmf[k] = prob_k(n, p_a, k);
        if (pmf[k] > pmf[mode])
            mode = k;
    }
    std::int64_t lo = mode;
    std::int64_t hi = mode;
    double mass = pmf[mode];
    while (mass < 1.0 - 1e-9 && (lo > 0 || hi < n)) {
        const double below = lo > 0 ? pmf[lo - 1] : -1.0;
        const double above = hi < n ? pmf[hi + 1] : -1.0;
        if (below >= above)
            mass += pmf[--lo];
        else
            mass += pmf[++hi];
    }
    return {lo, hi, std::max(0.0, 1.0 - mass)};
}

} // namespace detail

/**
 * Mutual information between the message bit and the eavesdropper's
 * compound-event string over exactly k bit-announcements. Evaluated as the
 * multinomial sum over class counts (k1,k2,k3) with k4 = k-k1-k2-k3, string
 * probabilities p1^k1 p2^k2 p3^k3 p4^k4 given b=0 and the (1<->2, 3<->4)
 * swap given b=1. Cost is cubic in k.
 */
inline double mutual_info_be_k(std::int64_t k, double d) {
    if (k < 0)
        throw std::invalid_argument("k must be nonnegative");
    if (k == 0)
        return 0.0;
    const auto p = eavesdropper::event_probabilities(d);
    std::vector<double> lf(static_cast<std::size_t>(k) + 1);
    for (std::int64_t i = 0; i <= k; ++i)
        lf[i] = detail::log_factorial(i);
    const std::array<double, 4> lp = {std::log(p[0]), std::log(p[1]),
                                      std::log(p[2]), std::log(p[3])};

    const bool all_positive = p[0] > 0.0 && p[1] > 0.0 && p[2] > 0.0 &&
                              p[3] > 0.0;
    double total = 0.0;
    if (all_positive) {
        // p2/p1 = p4/p3, so the two conditional string log-probabilities
        // differ by j*log(R) with j = (k1-k2)+(k3-k4). For each j,
        // mi_kernel(A, A*R^j) = A * gain(j); tabulating gain leaves one exp
        // per term. Out-of-range exponents fall back to the log-safe kernel.
        const double lr = lp[1] - lp[0];
        const std::size_t width = static_cast<std::size_t>(2 * k + 1);
        std::vector<double> gain(width, std::numeric_limits<double>::quiet_NaN());
        for (std::int64_t j = -k; j <= k; ++j) {
            const double l = static_cast<double>(j) * lr;
            if (std::abs(l) > 300.0)
                continue;
            const double r = std::exp(l);
            gain[static_cast<std::size_t>(j + k)] =
                (0.5 * r * l - 0.5 * (1.0 + r) * (std::log1p(r) - kLn2)) /
                kLn2;
        }
        for (std::int64_t k1 = 0; k1 <= k; ++k1) {
            for (std::int64_t k2 = 0; k2 <= k - k1; ++k2) {
                const double base01 = lf[k] - lf[k1] - lf[k2] +
                                      static_cast<double>(k1) * lp[0] +
                                      static_cast<double>(k2) * lp[1];
                for (std::int64_t k3 = 0; k3 <= k - k1 - k2; ++k3) {
                    const std::int64_t k4 = k - k1 - k2 - k3;
                    const double l0 = base01 - lf[k3] - lf[k4] +
                                      static_cast<double>(k3) * lp[2] +
                                      static_cast<double>(k4) * lp[3];
                    const std::int64_t j = (k1 - k2) + (k3 - k4);
                    const double g = gain[static_cast<std::size_t>(j + k)];
                    if (std::isnan(g)) {
                        const double lr_j = static_cast<double>(j) * lr;
                        total += mi_kernel_log(l0, l0 + lr_j);
                    } else {
                        total += std::exp(l0) * g;
                    }
                }
            }
        }
    } else {
        // Some class probability is zero (d at an endpoint): evaluate both
        // conditional log-probabilities termwise with 0*log(0) = 0.
        const auto power_term = [&](std::int64_t c, double lpv) {
            if (c == 0)
                return 0.0;
            return lpv == -std::numeric_limits<double>::infinity()
                       ? -std::numeric_limits<double>::infinity()
                       : static_cast<double>(c) * lpv;
        };
        for (std::int64_t k1 = 0; k1 <= k; ++k1)
            for (std::int64_t k2 = 0; k2 <= k - k1; ++k2)
                for (std::int64_t k3 = 0; k3 <= k - k1 - k2; ++k3) {
                    const std::int64_t k4 = k - k1 - k2 - k3;
                    const double lm =
                        lf[k] - lf[k1] - lf[k2] - lf[k3] - lf[k4];
                    const double l0 = power_term(k1, lp[0]) +
                                      power_term(k2, lp[1]) +
                                      power_term(k3, lp[2]) +
                                      power_term(k4, lp[3]);
                    const double l1 = power_term(k2, lp[0]) +
                                      power_term(k1, lp[1]) +
                                      power_term(k4, lp[2]) +
                                      power_term(k3, lp[3]);
                    total += mi_kernel_log(lm + l0, lm + l1);
                }
    }
    return detail::clamp_mi(total);
}

/**
 * Eavesdropper information weighted over the announcement-count
 * distribution: sum_k Pr(k) I_k. The Pr(k) tail beyond cumulative mass
 * 1 - 1e-9 is skipped and reported.
 */
inline MiResult mutual_info_be(std::int64_t n, double p_a, double d) {
    if (n < 1)
        throw std::invalid_argument("N must be at least 1");
    const auto window = detail::prob_k_window(n, p_a);
    MiResult out;
    out.truncation_mass = window.truncation_mass;
    for (std::int64_t k = window.lo; k <= window.hi; ++k) {
        out.value += prob_k(n, p_a, k) * mutual_info_be_k(k, d);
        ++out.terms_evaluated;
    }
    out.value = detail::clamp_mi(out.value);
    return out;
}

/**
 * Mutual information between the message bit and the receiver's
 * compound-event string after N shots with announcement probability p_a and
 * mismatch probability D. For each announcement count k the inner sums run
 * over the matched-basis count x ~ Binomial(k, 1/2) and the count y of
 * matched events whose announced bit contradicts the prepared state
 * (y ~ Binomial(x, D) given b=0).
 */
inline MiResult mutual_info_bc(std::int64_t n, double p_a, double D) {
    if (n < 1)
        throw std::invalid_argument("N must be at least 1");
    if (!(D >= 0.0 && D <= 0.5))
        throw std::invalid_argument("D must lie in [0, 1/2]");
    const double ld = std::log(D);
    const double l1md = std::log1p(-D);
    const auto window = detail::prob_k_window(n, p_a);
    MiResult out;
    out.truncation_mass = window.truncation_mass;
    for (std::int64_t k = window.lo; k <= window.hi; ++k) {
        const double pk = prob_k(n, p_a, k);
        double ik = 0.0;
        for (std::int64_t x = 0; x <= k; ++x) {
            const double lwx = detail::log_binomial(k, x) -
                               static_cast<double>(k) * kLn2;
            for (std::int64_t y = 0; y <= x; ++y) {
                const double lcy = detail::log_binomial(x, y);
                const double lu =
                    (y > 0 ? static_cast<double>(y) * ld : 0.0) +
                    static_cast<double>(x - y) * l1md;
                const double lv =
                    (x - y > 0 ? static_cast<double>(x - y) * ld : 0.0) +
                    static_cast<double>(y) * l1md;
                ik += mi_kernel_log(lwx + lcy + lu, lwx + lcy + lv);
                ++out.terms_evaluated;
            }
        }
        out.value += pk * detail::clamp_mi(ik);
    }
    out.value = detail::clamp_mi(out.value);
    return out;
}

/**
 * Single-announcement information ceiling at strength d:
 * 1/2 [(1+B) lg(1+B) + (1-B) lg(1-B)] with B = 2 sqrt(d(1-d)). Equal to
 * mutual_info_be_k(1, d) and to the plain mutual information of the
 * four-outcome probe-discrimination table.
 */
inline double fuchs_bound(double d) {
    if (!(d >= 0.0 && d <= 0.5))
        throw std::invalid_argument("invalid strength: d = " +
                                    std::to_string(d) + " outside [0, 1/2]");
    const double beta = 2.0 * std::sqrt(d * (1.0 - d));
    return detail::clamp_mi(0.5 * (xlg2(1.0 + beta) + xlg2(1.0 - beta)));
}

/**
 * Per-shot event table with conditional probabilities given each message
 * bit value. Columns must each sum to one.
 */
struct EventDistribution {
    struct Row {
        std::string label;
        double p_b0 = 0.0;
        double p_b1 = 0.0;
    };
    std::vector<Row> events;

    void validate() const {
        if (events.empty())
            throw std::invalid_argument("event distribution is empty");
        double s0 = 0.0;
        double s1 = 0.0;
        for (const auto &row : events) {
            if (row.p_b0 < 0.0 || row.p_b1 < 0.0)
                throw std::invalid_argument(
                    "event distribution has a negative probability");
            s0 += row.p_b0;
            s1 += row.p_b1;
        }
        if (std::abs(s0 - 1.0) > 1e-12 || std::abs(s1 - 1.0) > 1e-12)
            throw std::invalid_argument(
                "event distribution columns must sum to one");
    }
};

// The sixteen (basis, announced bit, outcome) events of a single
// bit-announcement shot under the strength-d attack.
inline EventDistribution eve_event_table(double d) {
    const auto p = eavesdropper::event_probabilities(d);
    const auto swapped = [&](int cls) {
        static constexpr std::array<int, 4> kSwap = {1, 0, 3, 2};
        return kSwap[cls];
    };
    EventDistribution dist;
    for (const Basis basis : kAllBases)
        for (int a = 0; a <= 1; ++a)
            for (int idx = 1; idx <= 4; ++idx) {
                const int cls =
                    eavesdropper::index_of(
                        eavesdropper::classify_event(basis, a, idx)) -
                    1;
                dist.events.push_back({to_string(basis) + ",a=" +
                                           std::to_string(a) + ",mu=" +
                                           std::to_string(idx),
                                       0.25 * p[cls], 0.25 * p[swapped(cls)]});
            }
    dist.validate();
    return dist;
}

// The same table folded to its four event classes.
inline EventDistribution eve_class_table(double d) {
    const auto p = eavesdropper::event_probabilities(d);
    EventDistribution dist;
    dist.events = {{"S1", p[0], p[1]},
                   {"S2", p[1], p[0]},
                   {"S3", p[2], p[3]},
                   {"S4", p[3], p[2]}};
    dist.validate();
    return dist;
}

/**
 * Exact mutual information for k independent shots of the given event
 * distribution, by explicit enumeration of all |events|^k strings.
 * Enumeration is budgeted at 1e7 strings.
 */
inline double brute_force_mi(const EventDistribution &dist, int k) {
    dist.validate();
    if (k < 0)
        throw std::invalid_argument("k must be nonnegative");
    if (k == 0)
        return 0.0;
    const std::size_t n_events = dist.events.size();
    double budget = 1.0;
    for (int i = 0; i < k; ++i) {
        budget *= static_cast<double>(n_events);
        if (budget > 1e7)
            throw std::invalid_argument(
                "too large: brute-force enumeration exceeds the 1e7-string "
                "budget");
    }
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    std::vector<double> pre0(static_cast<std::size_t>(k) + 1, 1.0);
    std::vector<double> pre1(static_cast<std::size_t>(k) + 1, 1.0);
    const auto refresh = [&](int from) {
        for (int i = from; i < k; ++i) {
            pre0[i + 1] = pre0[i] * dist.events[idx[i]].p_b0;
            pre1[i + 1] = pre1[i] * dist.events[idx[i]].p_b1;
        }
    };
    refresh(0);
    double total = 0.0;
    while (true) {
        total += mi_kernel(pre0[k], pre1[k]);
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == static_cast<int>(n_events) - 1) {
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0)
            break;
        ++idx[pos];
        refresh(pos);
    }
    return detail::clamp_mi(total);
}

/**
 * Plug-in mutual-information estimate from empirical single-shot event
 * counts under each message-bit value. Counts are sufficient because shots
 * are independent.
 */
inline double plugin_mi_estimate(const std::vector<std::int64_t> &counts_b0,
                                 const std::vector<std::int64_t> &counts_b1) {
    if (counts_b0.size() != counts_b1.size() || counts_b0.empty())
        throw std::invalid_argument("count vectors must match and be nonempty");
    std::int64_t n0 = 0;
    std::int64_t n1 = 0;
    for (std::size_t i = 0; i < counts_b0.size(); ++i) {
        if (counts_b0[i] < 0 || counts_b1[i] < 0)
            throw std::invalid_argument("counts must be nonnegative");
        n0 += counts_b0[i];
        n1 += counts_b1[i];
    }
    if (n0 < 1 || n1 < 1)
        throw std::invalid_argument("need at least one count per bit value");
    const double n = static_cast<double>(n0 + n1);
    double mi = 0.0;
    for (std::size_t i = 0; i < counts_b0.size(); ++i) {
        const double pe = static_cast<double>(counts_b0[i] + counts_b1[i]) / n;
        if (pe == 0.0)
            continue;
        for (const auto &[ce, nb] :
             {std::pair{counts_b0[i], n0}, std::pair{counts_b1[i], n1}}) {
            if (ce == 0)
                continue;
            const double joint = static_cast<double>(ce) / n;
            const double cond = static_cast<double>(ce) /
                                static_cast<double>(nb);
            mi += joint * std::log2(cond / pe);
        }
    }
    return detail::clamp_mi(mi);
}

} // namespace eavesim::infotheory
