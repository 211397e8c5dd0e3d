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

#pragma once

#include "shardcache/error.hpp"
#include "shardcache/model.hpp"

#include <algorithm>
#include <vector>

namespace shardcache {

/// Split of a population vector into delivery rounds, each dominated by the
/// base vector.
struct RoundPlan {
  std::vector<CountVector> rounds;

  std::size_t beta() const { return rounds.size(); }
};

/// max_c ceil(V[c] / base[c]); caches with V[c] = 0 contribute 0.
inline Count round_count(const CountVector& population, const CacheLayout& layout) {
  Count beta = 0;
  for (std::size_t c = 0; c < population.size(); ++c) {
    Count b = layout.base()[c];
    beta = std::max(beta, (population[c] + b - 1) / b);
  }
  return beta;
}

/// Greedy fill: round j takes min(remaining, base) users from every cache.
inline RoundPlan partition_population(const CountVector& population, const CacheLayout& layout) {
  if (population.size() != layout.caches())
    throw Error(ErrorCode::InvalidArgument, "population vector has wrong length");
  for (Count v : population)
    if (v < 0) throw Error(ErrorCode::InvalidArgument, "negative cache population");
  RoundPlan plan;
  CountVector remaining = population;
  const Count beta = round_count(population, layout);
  plan.rounds.reserve(static_cast<std::size_t>(beta));
  for (Count j = 0; j < beta; ++j) {
    CountVector round(remaining.size());
    for (std::size_t c = 0; c < remaining.size(); ++c) {
      round[c] = std::min(remaining[c], layout.base()[c]);
      remaining[c] -= round[c];
    }
    plan.rounds.push_back(std::move(round));
  }
  return plan;
}

enum class RoundCase { Full, Deficit };

struct RoundClass {
  RoundCase kind = RoundCase::Full;
  std::vector<std::size_t> deficit;  // caches with fewer users than base slots
};

inline RoundClass classify_round(const CountVector& round, const CacheLayout& layout) {
  RoundClass out;
  for (std::size_t c = 0; c < round.size(); ++c)
    if (round[c] < layout.base()[c]) out.deficit.push_back(c);
  out.kind = out.deficit.empty() ? RoundCase::Full : RoundCase::Deficit;
  return out;
}

}  // namespace shardcache
