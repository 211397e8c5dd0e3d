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

#include "oracles.hpp"
#include "shardcache/partition.hpp"

#include <gtest/gtest.h>

#include <random>

namespace sc = shardcache;

TEST(PartitionPopulation, WorkedExample) {
  auto layout = sc::CacheLayout::from_expected({4, 2, 2, 2});
  auto plan = sc::partition_population({6, 2, 1, 1}, layout);
  EXPECT_EQ(plan.beta(), 3u);
  EXPECT_EQ(plan.rounds, (std::vector<sc::CountVector>{{2, 1, 1, 1}, {2, 1, 0, 0}, {2, 0, 0, 0}}));
}

TEST(PartitionPopulation, ExpectedLoadsGiveAlphaFullRounds) {
  for (auto expected : {sc::CountVector{4, 2, 2, 2}, sc::CountVector{8, 6, 6, 4, 2, 2},
                        sc::CountVector{9, 9, 3}}) {
    auto layout = sc::CacheLayout::from_expected(expected);
    auto plan = sc::partition_population(expected, layout);
    EXPECT_EQ(static_cast<sc::Count>(plan.beta()), layout.alpha());
    for (const auto& r : plan.rounds) EXPECT_EQ(r, layout.base());
  }
}

TEST(PartitionPopulation, AllUsersOnLastCache) {
  auto layout = sc::CacheLayout::from_expected({4, 2, 2, 2});
  auto plan = sc::partition_population({0, 0, 0, 10}, layout);
  ASSERT_EQ(plan.beta(), 10u);
  for (const auto& r : plan.rounds) EXPECT_EQ(r, (sc::CountVector{0, 0, 0, 1}));
}

TEST(PartitionPopulation, EmptyPopulationHasNoRounds) {
  auto layout = sc::CacheLayout::from_expected({4, 2, 2, 2});
  EXPECT_EQ(sc::partition_population({0, 0, 0, 0}, layout).beta(), 0u);
}

TEST(PartitionPopulation, PropertiesAgainstAlgorithmLoop) {
  std::mt19937_64 rng(17);
  for (auto expected : {sc::CountVector{4, 2, 2, 2}, sc::CountVector{8, 6, 6, 4, 2, 2},
                        sc::CountVector{6, 3, 3}, sc::CountVector{5, 5, 5, 5}}) {
    auto layout = sc::CacheLayout::from_expected(expected);
    for (int trial = 0; trial < 10000; ++trial) {
      auto v = oracle::random_population(rng, expected.size(), 1 + trial % 40);
      auto plan = sc::partition_population(v, layout);
      // Reassembly and domination.
      sc::CountVector sum(v.size(), 0);
      for (const auto& r : plan.rounds)
        for (std::size_t c = 0; c < v.size(); ++c) {
          ASSERT_LE(r[c], layout.base()[c]);
          sum[c] += r[c];
        }
      ASSERT_EQ(sum, v);
      // Same rounds as the literal loop, and the ceiling closed form.
      ASSERT_EQ(plan.rounds, oracle::greedy_rounds(v, layout.base()));
      sc::Count beta = 0;
      for (std::size_t c = 0; c < v.size(); ++c)
        beta = std::max(beta, (v[c] + layout.base()[c] - 1) / layout.base()[c]);
      ASSERT_EQ(static_cast<sc::Count>(plan.beta()), beta);
    }
  }
}

TEST(ClassifyRound, WorkedExampleRounds) {
  auto layout = sc::CacheLayout::from_expected({4, 2, 2, 2});
  auto full = sc::classify_round({2, 1, 1, 1}, layout);
  EXPECT_EQ(full.kind, sc::RoundCase::Full);
  EXPECT_TRUE(full.deficit.empty());
  auto second = sc::classify_round({2, 1, 0, 0}, layout);
  EXPECT_EQ(second.kind, sc::RoundCase::Deficit);
  EXPECT_EQ(second.deficit, (std::vector<std::size_t>{2, 3}));  // caches 3, 4
  auto third = sc::classify_round({2, 0, 0, 0}, layout);
  EXPECT_EQ(third.deficit, (std::vector<std::size_t>{1, 2, 3}));  // caches 2, 3, 4
}
