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
 * @file evaluate.hpp
 * @brief Average delay over the random association: exact enumeration of
 *        all population vectors, sampling-based estimates, the uniform
 *        cache-size baseline and the subpacketization comparison.
 *
 * Every per-instance delay is an integer count over a layout-wide
 * denominator (S for this scheme, C(Λ,t) for the baseline), so all sums are
 * accumulated as exact integers and only the final mean is a rational.
 */

#pragma once

#include "shardcache/combinatorics.hpp"
#include "shardcache/delivery.hpp"
#include "shardcache/error.hpp"
#include "shardcache/model.hpp"
#include "shardcache/parallel.hpp"
#include "shardcache/placement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace shardcache {

inline constexpr std::uint64_t kSamplesPerBlock = 4096;

/// K!/(Π V_c!) · Π p_c^{V_c}.
inline Rational multinomial_probability(const CountVector& population,
                                        const std::vector<Rational>& intensities, Count users) {
  if (population.size() != intensities.size())
    throw Error(ErrorCode::InvalidArgument, "population and intensity lengths differ");
  Count total = 0;
  for (Count v : population) total += v;
  if (total != users) throw Error(ErrorCode::InvalidArgument, "population does not sum to K");
  BigInt coefficient = factorial(users);
  Rational prob = 1;
  for (std::size_t c = 0; c < population.size(); ++c) {
    coefficient /= factorial(population[c]);
    prob *= make_rational(
        boost::multiprecision::pow(numerator(intensities[c]), static_cast<unsigned>(population[c])),
        boost::multiprecision::pow(denominator(intensities[c]), static_cast<unsigned>(population[c])));
  }
  return prob * coefficient;
}

/// Σ_{λ=1}^{Λ-t} L(λ)·C(Λ-λ, t), with L the loads sorted descending. The
/// baseline delay is this over C(Λ, t).
inline BigInt uniform_baseline_numerator(const CountVector& population, Count t) {
  CountVector sorted = population;
  std::ranges::sort(sorted, std::greater<>{});
  const Count caches = static_cast<Count>(sorted.size());
  BigInt acc = 0;
  for (Count l = 1; l <= caches - t; ++l) acc += sorted[l - 1] * binomial(caches - l, t);
  return acc;
}

inline Rational uniform_baseline_delay(const CountVector& population, Count caches, Count t) {
  if (static_cast<Count>(population.size()) != caches)
    throw Error(ErrorCode::InvalidArgument, "population vector has wrong length");
  if (t < 1 || t >= caches) throw Error(ErrorCode::BadBudget, "t must lie in [1, lambda-1]");
  return make_rational(uniform_baseline_numerator(population, t), binomial(caches, t));
}

struct ExactAverages {
  Rational ours;
  Rational uniform;
  BigInt compositions;
  Rational probability_mass;  // Σ P(V); exactly 1
};

/// Enumerates every weak composition of K into Λ parts and weights both
/// schemes' delays by the multinomial probability.
inline ExactAverages exact_averages(const SystemConfig& cfg, const CacheLayout& layout, Count t,
                                    std::uint64_t cap = kDefaultEnumerationCap) {
  const std::size_t caches = layout.caches();
  BigInt count = CompositionCursor::count(cfg.users, caches);
  if (count > cap)
    throw Error(ErrorCode::EnumerationTooLarge,
                std::to_string(caches) + " caches and " + std::to_string(cfg.users) +
                    " users give " + count.str() + " population vectors (cap " +
                    std::to_string(cap) + "); use the sampling estimate instead");
  // P(V) = multinomial(V) · Π n_c^{V_c} / D^K with p_c = n_c / D.
  BigInt common = 1;
  for (const Rational& p : cfg.intensities) {
    BigInt d = denominator(p);
    common = common / boost::multiprecision::gcd(common, d) * d;
  }
  std::vector<BigInt> scaled;
  for (const Rational& p : cfg.intensities) scaled.push_back(numerator(p) * (common / denominator(p)));
  std::vector<BigInt> fact(static_cast<std::size_t>(cfg.users) + 1);
  fact[0] = 1;
  for (Count i = 1; i <= cfg.users; ++i) fact[i] = fact[i - 1] * i;

  DelayModel model(layout, t);
  BigInt mass = 0, ours = 0, uniform = 0;
  for (CompositionCursor cur(cfg.users, caches); !cur.exhausted(); cur.advance()) {
    const CountVector& v = cur.current();
    BigInt weight = fact[cfg.users];
    for (std::size_t c = 0; c < caches; ++c) {
      weight /= fact[v[c]];
      weight *= boost::multiprecision::pow(scaled[c], static_cast<unsigned>(v[c]));
    }
    mass += weight;
    ours += weight * model.transmissions(v);
    uniform += weight * uniform_baseline_numerator(v, t);
  }
  BigInt scale = boost::multiprecision::pow(common, static_cast<unsigned>(cfg.users));
  ExactAverages out;
  out.ours = make_rational(ours, scale * model.subpackets());
  out.uniform = make_rational(uniform, scale * binomial(static_cast<Count>(caches), t));
  out.compositions = count;
  out.probability_mass = make_rational(mass, scale);
  return out;
}

/// Σ_V P(V)·T(V) over all population vectors, at the config's budget.
inline Rational exact_average_delay(const SystemConfig& cfg, const CacheLayout& layout,
                                    std::uint64_t cap = kDefaultEnumerationCap) {
  return exact_averages(cfg, layout, cfg.budget, cap).ours;
}

/// Running sums of integer-valued samples x/denominator.
struct SampleMoments {
  std::uint64_t n = 0;
  BigInt sum = 0;
  BigInt sum_sq = 0;

  void add(const BigInt& x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const SampleMoments& o) {
    n += o.n;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
};

struct Estimate {
  Rational mean;
  double std_error = 0.0;  // sample stddev / sqrt(n)
  std::uint64_t samples = 0;
};

inline Estimate finish_estimate(const SampleMoments& m, const BigInt& denominator_) {
  Estimate e;
  e.samples = m.n;
  if (m.n == 0) return e;
  e.mean = make_rational(m.sum, denominator_ * m.n);
  if (m.n > 1) {
    // Unbiased variance in units of 1/denominator², computed exactly.
    Rational var = make_rational(m.sum_sq * m.n - m.sum * m.sum,
                                 BigInt(m.n) * (m.n - 1) * denominator_ * denominator_);
    e.std_error = std::sqrt(to_double(var) / static_cast<double>(m.n));
  }
  return e;
}

struct SbnResult {
  Count budget = 0;
  Estimate ours;
  Estimate uniform;
};

/// Sampling-based estimates for several budgets over one common set of
/// `samples` population vectors. Samples are drawn in fixed-size blocks,
/// each seeded from (seed, block index), so the result does not depend on
/// `workers`.
inline std::vector<SbnResult> sbn_sweep(const SystemConfig& cfg, const CacheLayout& layout,
                                        const std::vector<Count>& budgets, std::uint64_t samples,
                                        std::uint64_t seed, unsigned workers = 0) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be at least 1");
  for (Count t : budgets)
    if (t < 1 || t >= static_cast<Count>(layout.caches()))
      throw Error(ErrorCode::BadBudget, "t = " + std::to_string(t) + " is outside [1, " +
                                            std::to_string(layout.caches() - 1) + "]");
  if (workers == 0) workers = default_worker_count();
  PopulationSampler sampler(cfg);
  std::vector<DelayModel> models;
  for (Count t : budgets) models.emplace_back(layout, t);

  using Block = std::vector<std::pair<SampleMoments, SampleMoments>>;
  const std::size_t blocks = static_cast<std::size_t>((samples + kSamplesPerBlock - 1) / kSamplesPerBlock);
  auto partial = map_blocks<Block>(blocks, workers, [&](std::size_t b) {
    Block acc(budgets.size());
    std::mt19937_64 rng = block_rng(seed, b);
    const std::uint64_t begin = b * kSamplesPerBlock;
    const std::uint64_t end = std::min<std::uint64_t>(samples, begin + kSamplesPerBlock);
    for (std::uint64_t s = begin; s < end; ++s) {
      CountVector v = sampler.draw_population(rng);
      for (std::size_t i = 0; i < budgets.size(); ++i) {
        acc[i].first.add(models[i].transmissions(v));
        acc[i].second.add(uniform_baseline_numerator(v, budgets[i]));
      }
    }
    return acc;
  });

  std::vector<SbnResult> out;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    SampleMoments ours, uni;
    for (const Block& blk : partial) {
      ours.merge(blk[i].first);
      uni.merge(blk[i].second);
    }
    out.push_back(SbnResult{budgets[i], finish_estimate(ours, models[i].subpackets()),
                            finish_estimate(uni, binomial(static_cast<Count>(layout.caches()),
                                                          budgets[i]))});
  }
  return out;
}

/// Mean and standard error of T(V) over `samples` multinomial draws.
inline Estimate sbn_average_delay(const SystemConfig& cfg, const CacheLayout& layout,
                                  std::uint64_t samples, std::uint64_t seed, unsigned workers = 0) {
  return sbn_sweep(cfg, layout, {cfg.budget}, samples, seed, workers).front().ours;
}

enum class Method { Exact, Sbn };

struct EvaluationReport {
  Method method = Method::Sbn;
  Count budget = 0;
  Estimate mean;
  Estimate baseline;
  BigInt subpacketization_ours;
  BigInt subpacketization_soa;
  Count alpha = 0;
  BigInt alpha_gain;  // α^t
};

/// Subpacketization of the same scheme without the GCD reduction, i.e. the
/// closed form evaluated on V̄ instead of V̂.
inline BigInt subpacketization_unreduced(const CacheLayout& layout, Count t) {
  return elementary_symmetric(layout.expected(), t);
}

/// One report per budget. Both schemes see the same population vectors.
inline std::vector<EvaluationReport> evaluate_sweep(const SystemConfig& cfg,
                                                    const CacheLayout& layout,
                                                    const std::vector<Count>& budgets,
                                                    Method method, std::uint64_t samples,
                                                    std::uint64_t seed, unsigned workers = 0,
                                                    std::uint64_t cap = kDefaultEnumerationCap) {
  std::vector<EvaluationReport> out;
  auto fill_static = [&](EvaluationReport& r, Count t) {
    r.method = method;
    r.budget = t;
    r.subpacketization_ours = subpacketization(layout, t);
    r.subpacketization_soa = subpacketization_unreduced(layout, t);
    r.alpha = layout.alpha();
    r.alpha_gain = boost::multiprecision::pow(BigInt(layout.alpha()), static_cast<unsigned>(t));
  };
  if (method == Method::Exact) {
    for (Count t : budgets) {
      if (t < 1 || t >= static_cast<Count>(layout.caches()))
        throw Error(ErrorCode::BadBudget, "t = " + std::to_string(t) + " is outside [1, " +
                                              std::to_string(layout.caches() - 1) + "]");
      EvaluationReport r;
      fill_static(r, t);
      ExactAverages ex = exact_averages(cfg, layout, t, cap);
      r.mean.mean = ex.ours;
      r.baseline.mean = ex.uniform;
      out.push_back(std::move(r));
    }
    return out;
  }
  for (const SbnResult& s : sbn_sweep(cfg, layout, budgets, samples, seed, workers)) {
    EvaluationReport r;
    fill_static(r, s.budget);
    r.mean = s.ours;
    r.baseline = s.uniform;
    out.push_back(std::move(r));
  }
  return out;
}

/// Report at the config's own budget; exact when the composition count fits
/// under `cap`, sampled otherwise.
inline EvaluationReport compare_report(const SystemConfig& cfg, std::uint64_t samples,
                                       std::uint64_t seed, std::optional<Method> method = {},
                                       unsigned workers = 0,
                                       std::uint64_t cap = kDefaultEnumerationCap) {
  CacheLayout layout = derive_layout(cfg);
  Method m = method.value_or(CompositionCursor::count(cfg.users, layout.caches()) <= cap
                                 ? Method::Exact
                                 : Method::Sbn);
  return evaluate_sweep(cfg, layout, {cfg.budget}, m, samples, seed, workers, cap).front();
}

struct TradeoffResult {
  Count alpha_before = 0;
  Count alpha_after = 0;
  BigInt subpacketization_before;
  BigInt subpacketization_after;
  Rational subpacketization_ratio;  // before / after
  Rational reduction_factor;        // unreduced S on the augmented loads / after = α_after^t
  Rational delay_before;
  Rational delay_after;
};

/// Adds `augment` virtual users to the expected loads and compares the
/// fixed-association scheme before and after.
inline TradeoffResult virtual_user_tradeoff(const CountVector& expected, const CountVector& augment,
                                            Count t) {
  if (expected.size() != augment.size())
    throw Error(ErrorCode::InvalidArgument, "augment vector has wrong length");
  CountVector grown = expected;
  for (std::size_t c = 0; c < grown.size(); ++c) {
    if (augment[c] < 0) throw Error(ErrorCode::InvalidArgument, "augment entries must be >= 0");
    grown[c] += augment[c];
  }
  CacheLayout before = CacheLayout::from_expected(expected);
  CacheLayout after = CacheLayout::from_expected(grown);
  if (t < 1 || t >= static_cast<Count>(before.caches()))
    throw Error(ErrorCode::BadBudget, "t must lie in [1, lambda-1]");
  TradeoffResult r;
  r.alpha_before = before.alpha();
  r.alpha_after = after.alpha();
  r.subpacketization_before = subpacketization(before, t);
  r.subpacketization_after = subpacketization(after, t);
  r.subpacketization_ratio = make_rational(r.subpacketization_before, r.subpacketization_after);
  r.reduction_factor = make_rational(subpacketization_unreduced(after, t), r.subpacketization_after);
  r.delay_before = deterministic_delivery_time(before, t);
  r.delay_after = deterministic_delivery_time(after, t);
  return r;
}

}  // namespace shardcache
