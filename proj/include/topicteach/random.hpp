// Copyright 2026 The topicteach Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOPICTEACH_RANDOM_HPP
#define TOPICTEACH_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <topicteach/log_math.hpp>

/**
 * \file
 * \brief Seed derivation and the few sampling primitives the library needs.
 *
 * All randomness flows through explicitly passed seeds. Child seeds are derived by hashing
 * (parent, index...) so that work split across threads draws the same numbers as serial execution.
 */

namespace topicteach {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

/// SplitMix64 engine. Eight bytes of state, so seeding one stream per sample is free.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_{seed} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept {
    const result_type out = mix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return out;
  }

  friend constexpr bool operator==(const SplitMix64&, const SplitMix64&) = default;

 private:
  std::uint64_t state_;
};

using Rng = SplitMix64;

/// Child seed for the path (parent, indices...).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t s = mix64(parent);
  for (std::uint64_t i : path) {
    s = mix64(s ^ mix64(i + 0x632be59bd9b4e019ULL));
  }
  return s;
}

/// FNV-1a; stable across platforms, used to key seeds by document id.
constexpr std::uint64_t stable_hash(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
  // 53 random bits.
  return static_cast<double>(rng() >> 11U) * 0x1.0p-53;
}

/// Uniform integer in [0, n).
inline std::size_t uniform_index(std::size_t n, Rng& rng) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

/// Draw an index with probability proportional to the nonnegative `weights`, given their sum.
inline std::size_t sample_categorical(std::span<const double> weights, double total, Rng& rng) {
  const double target = uniform01(rng) * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (target < cumulative) {
      return i;
    }
  }
  // Rounding: fall back to the last index with positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) {
      return i;
    }
  }
  return weights.size() - 1;
}

inline std::size_t sample_categorical(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) {
    total += w;
  }
  return sample_categorical(weights, total, rng);
}

/// Dirichlet draw computed through log-gamma variates.
/**
 * Uses Gamma(a) = Gamma(a + 1) * U^(1/a) so that small concentrations do not underflow to exact
 * zeros before normalization.
 */
inline std::vector<double> sample_dirichlet(std::span<const double> concentration, Rng& rng) {
  std::vector<double> log_gamma(concentration.size());
  for (std::size_t i = 0; i < concentration.size(); ++i) {
    const double a = concentration[i];
    std::gamma_distribution<double> gamma{a + 1.0, 1.0};
    double u = uniform01(rng);
    while (u == 0.0) {
      u = uniform01(rng);
    }
    log_gamma[i] = std::log(gamma(rng)) + std::log(u) / a;
  }
  return normalize_log(log_gamma);
}

}  // namespace topicteach

#endif  // TOPICTEACH_RANDOM_HPP
