// Copyright Contributors to the Forge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace forge {

/// 64-bit FNV-1a; stable across platforms, used to key streams by image id.
constexpr std::uint64_t
fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Deterministic random stream keyed by (global seed, image id, counter).
///
/// Backed by std::mt19937_64 seeded through std::seed_seq, both of which are
/// fully specified by the standard, so a key yields the same sequence on every
/// conforming implementation. Reals are derived from raw 64-bit outputs here
/// rather than through std distributions, whose algorithms are unspecified.
class RandomStream {
  public:
    RandomStream(std::uint64_t global_seed, std::string_view image_id, std::uint64_t counter) {
        const std::uint64_t id_hash = fnv1a64(image_id);
        std::seed_seq seq{static_cast<std::uint32_t>(global_seed),
                          static_cast<std::uint32_t>(global_seed >> 32),
                          static_cast<std::uint32_t>(id_hash),
                          static_cast<std::uint32_t>(id_hash >> 32),
                          static_cast<std::uint32_t>(counter),
                          static_cast<std::uint32_t>(counter >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t
    next_u64() {
        return engine_();
    }

    /// Uniform on [0, 1) with 53 random bits.
    double
    uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double
    uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Standard normal via Box-Muller; the second variate is cached.
    double
    normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r  = std::sqrt(-2.0 * std::log(u1));
        const double a  = 2.0 * std::numbers::pi * u2;
        spare_          = r * std::sin(a);
        has_spare_      = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 engine_;
    double spare_   = 0.0;
    bool has_spare_ = false;
};

} // namespace forge
