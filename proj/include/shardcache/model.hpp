/*
 * Copyright 2026 The shardcache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file model.hpp
 * @brief Network configuration, expected/base cache loads and the
 *        virtual-cache layout, and the random user-to-cache association.
 *
 * Indices are zero-based in the API (users, files, caches, virtual caches).
 * Text emitted by the CLI and the dump helpers is one-based.
 */

#pragma once

#include "shardcache/combinatorics.hpp"
#include "shardcache/error.hpp"
#include "shardcache/rational.hpp"

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace shardcache {

/// K users, N unit-size files, Λ caches, normalized budget t and the cache
/// population intensities p (exact rationals, sorted non-increasing).
struct SystemConfig {
  Count users = 0;
  Count files = 0;
  Count caches = 0;
  Count budget = 0;
  std::vector<Rational> intensities;
};

/// Returns `cfg` unchanged if every invariant holds, throws otherwise.
inline SystemConfig validate_config(SystemConfig cfg) {
  if (cfg.users < 1) throw Error(ErrorCode::BadConfig, "K must be a positive integer");
  if (cfg.files < 1) throw Error(ErrorCode::BadConfig, "N must be a positive integer");
  if (cfg.caches < 1) throw Error(ErrorCode::BadConfig, "lambda must be a positive integer");
  if (static_cast<Count>(cfg.intensities.size()) != cfg.caches)
    throw Error(ErrorCode::BadIntensities,
                "p has " + std::to_string(cfg.intensities.size()) + " entries, expected " +
                    std::to_string(cfg.caches));
  Rational sum = 0;
  for (std::size_t i = 0; i < cfg.intensities.size(); ++i) {
    const Rational& p = cfg.intensities[i];
    if (p <= 0)
      throw Error(ErrorCode::BadIntensities,
                  "p_" + std::to_string(i + 1) + " = " + to_fraction(p) + " is not positive");
    if (i > 0 && p > cfg.intensities[i - 1])
      throw Error(ErrorCode::BadIntensities, "p must be sorted non-increasing (p_" +
                                                 std::to_string(i + 1) + " > p_" +
                                                 std::to_string(i) + ")");
    sum += p;
  }
  if (sum != 1)
    throw Error(ErrorCode::BadIntensities, "p sums to " + to_fraction(sum) + ", not 1");
  if (cfg.budget < 1 || cfg.budget >= cfg.caches)
    throw Error(ErrorCode::BadBudget, "t = " + std::to_string(cfg.budget) +
                                          " is outside [1, " + std::to_string(cfg.caches - 1) +
                                          "]");
  for (std::size_t i = 0; i < cfg.intensities.size(); ++i) {
    Rational load = cfg.intensities[i] * cfg.users;
    if (denominator(load) != 1)
      throw Error(ErrorCode::NonIntegerExpectedLoad,
                  "K*p_" + std::to_string(i + 1) + " = " + to_decimal(load) +
                      " is not an integer");
  }
  return cfg;
}

/// Expected loads V̄, their GCD α, the base vector V̂ = V̄/α and the
/// contiguous virtual-cache blocks owned by each physical cache.
class CacheLayout {
 public:
  /// Builds the layout from an expected load vector with positive entries.
  static CacheLayout from_expected(CountVector expected) {
    if (expected.empty()) throw Error(ErrorCode::InvalidArgument, "empty load vector");
    Count g = 0;
    for (Count v : expected) {
      if (v <= 0) throw Error(ErrorCode::InvalidArgument, "expected loads must be positive");
      g = std::gcd(g, v);
    }
    CacheLayout layout;
    layout.expected_ = std::move(expected);
    layout.alpha_ = g;
    layout.first_virtual_.reserve(layout.expected_.size() + 1);
    layout.first_virtual_.push_back(0);
    for (std::size_t c = 0; c < layout.expected_.size(); ++c) {
      Count b = layout.expected_[c] / g;
      layout.base_.push_back(b);
      for (Count i = 0; i < b; ++i) layout.owner_of_.push_back(c);
      layout.first_virtual_.push_back(layout.owner_of_.size());
    }
    return layout;
  }

  std::size_t caches() const { return expected_.size(); }
  const CountVector& expected() const { return expected_; }
  const CountVector& base() const { return base_; }
  Count alpha() const { return alpha_; }
  std::size_t virtual_count() const { return owner_of_.size(); }
  std::size_t owner_of(std::size_t virtual_cache) const { return owner_of_.at(virtual_cache); }
  const std::vector<std::size_t>& owners() const { return owner_of_; }

  /// First virtual cache of physical cache `cache`; the block is
  /// [first_virtual(c), first_virtual(c) + base()[c]).
  std::size_t first_virtual(std::size_t cache) const { return first_virtual_.at(cache); }

  bool operator==(const CacheLayout&) const = default;

 private:
  CacheLayout() = default;

  CountVector expected_;
  CountVector base_;
  Count alpha_ = 0;
  std::vector<std::size_t> owner_of_;
  std::vector<std::size_t> first_virtual_;
};

/// V̄ = K·p. `cfg` must already be validated.
inline CacheLayout derive_layout(const SystemConfig& cfg) {
  CountVector expected;
  expected.reserve(cfg.intensities.size());
  for (const Rational& p : cfg.intensities) {
    Rational load = p * cfg.users;
    expected.push_back(numerator(load).convert_to<Count>());
  }
  return CacheLayout::from_expected(std::move(expected));
}

/// Realized association V and demands d. Users are numbered cache by cache:
/// the first V[0] users belong to cache 0, the next V[1] to cache 1, etc.
struct PopulationInstance {
  CountVector population;
  std::vector<Count> demands;
};

enum class DemandMode { WorstCase, RandomDemands };

/// Index of the first user of every cache, plus a trailing total.
inline std::vector<std::size_t> user_offsets(const CountVector& population) {
  std::vector<std::size_t> offsets{0};
  for (Count v : population) offsets.push_back(offsets.back() + static_cast<std::size_t>(v));
  return offsets;
}

/// Draws cache indices from p by exact integer thresholds: with p_λ = n_λ/D
/// over a common denominator D, a uniform integer u in [0, D) selects the
/// first cache whose cumulative numerator exceeds u.
class PopulationSampler {
 public:
  explicit PopulationSampler(const SystemConfig& cfg) : users_(cfg.users) {
    BigInt common = 1;
    for (const Rational& p : cfg.intensities) {
      BigInt d = denominator(p);
      common = common / boost::multiprecision::gcd(common, d) * d;
    }
    if (common > BigInt(std::numeric_limits<std::uint64_t>::max()))
      throw Error(ErrorCode::BadIntensities, "common denominator of p exceeds 64 bits");
    BigInt running = 0;
    for (const Rational& p : cfg.intensities) {
      running += numerator(p) * (common / denominator(p));
      cumulative_.push_back(running.convert_to<std::uint64_t>());
    }
    denominator_ = common.convert_to<std::uint64_t>();
  }

  std::size_t draw_cache(std::mt19937_64& rng) const {
    std::uniform_int_distribution<std::uint64_t> dist(0, denominator_ - 1);
    std::uint64_t u = dist(rng);
    std::size_t c = 0;
    while (u >= cumulative_[c]) ++c;
    return c;
  }

  /// K independent categorical draws, tallied per cache.
  CountVector draw_population(std::mt19937_64& rng) const {
    CountVector v(cumulative_.size(), 0);
    for (Count k = 0; k < users_; ++k) ++v[draw_cache(rng)];
    return v;
  }

 private:
  Count users_;
  std::uint64_t denominator_ = 1;
  std::vector<std::uint64_t> cumulative_;
};

inline PopulationInstance sample_population(const SystemConfig& cfg, std::uint64_t seed,
                                            DemandMode mode) {
  if (mode == DemandMode::WorstCase && cfg.files < cfg.users)
    throw Error(ErrorCode::WorstCaseNeedsEnoughFiles,
                "worst-case demands need N >= K (N = " + std::to_string(cfg.files) +
                    ", K = " + std::to_string(cfg.users) + ")");
  std::mt19937_64 rng(seed);
  PopulationInstance inst;
  inst.population = PopulationSampler(cfg).draw_population(rng);
  inst.demands.resize(static_cast<std::size_t>(cfg.users));
  if (mode == DemandMode::WorstCase) {
    std::iota(inst.demands.begin(), inst.demands.end(), Count{0});
  } else {
    std::uniform_int_distribution<Count> file(0, cfg.files - 1);
    for (Count& d : inst.demands) d = file(rng);
  }
  return inst;
}

}  // namespace shardcache
