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

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace eavesim {

/**
 * Deterministic seeded generator. All protocol randomness flows through one
 * instance so identically seeded runs are bit-for-bit reproducible; the
 * primitives below avoid std::<distribution> types, whose output is
 * implementation-defined.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n); exact (rejection-free) for powers of two.
    std::uint32_t uniform_index(std::uint32_t n) {
        if (n == 0)
            throw std::invalid_argument("uniform_index: n must be positive");
        if ((n & (n - 1)) == 0)
            return static_cast<std::uint32_t>(gen_() & (n - 1));
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = gen_();
        while (v >= limit)
            v = gen_();
        return static_cast<std::uint32_t>(v % n);
    }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::mt19937_64 gen_;
};

} // namespace eavesim
