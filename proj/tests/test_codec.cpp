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
#include "shardcache/codec.hpp"

#include <gtest/gtest.h>

#include <random>

namespace sc = shardcache;

namespace {

struct Worked {
  sc::CacheLayout layout = sc::CacheLayout::from_expected({4, 2, 2, 2});
  sc::PlacementMap placement = sc::build_placement(layout, 2, 10);
  sc::PopulationInstance instance{{6, 2, 1, 1}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
};

}  // namespace

TEST(MaterializeFiles, SplitsEvenly) {
  auto store = sc::materialize_files(10, 9, 7, 900);
  EXPECT_EQ(store.file_count(), 10u);
  EXPECT_EQ(store.subpacket_length(), 100u);
  EXPECT_EQ(store.file_length(), 900u);
  EXPECT_EQ(store.subpacket(3, 4).size(), 100u);
}

TEST(MaterializeFiles, PadsToMultipleOfSubpackets) {
  auto store = sc::materialize_files(2, 9, 7, 907);
  EXPECT_EQ(store.subpacket_length(), 101u);
  EXPECT_EQ(store.file_length(), 909u);
  EXPECT_EQ(store.file(0)[907], 0);
  EXPECT_EQ(store.file(0)[908], 0);
}

TEST(MaterializeFiles, DependsOnlyOnSeedAndIndex) {
  auto a = sc::materialize_files(4, 9, 11, 900);
  auto b = sc::materialize_files(6, 9, 11, 900);
  auto c = sc::materialize_files(4, 9, 12, 900);
  for (sc::Count i = 0; i < 4; ++i) {
    EXPECT_EQ(a.file(i), b.file(i));
    EXPECT_NE(a.file(i), c.file(i));
  }
  EXPECT_NE(a.file(0), a.file(1));
}

TEST(MaterializeFiles, RejectsPayloadSmallerThanSubpacketCount) {
  try {
    sc::materialize_files(1, 9, 0, 8);
    FAIL();
  } catch (const sc::Error& e) {
    EXPECT_EQ(e.code(), sc::ErrorCode::PayloadTooSmall);
  }
}

TEST(CacheContent, HoldsExactlyThePlacedPieces) {
  Worked w;
  auto store = sc::materialize_files(10, 9, 1, 900);
  sc::CacheContent first(store, w.placement, 0);
  EXPECT_EQ(first.size(), 10u * 6u);
  sc::CacheContent second(store, w.placement, 1);
  EXPECT_EQ(second.size(), 10u * 4u);
  for (std::size_t j = 0; j < 9; ++j) {
    const auto* piece = second.find(5, j);
    EXPECT_EQ(piece != nullptr, w.placement.stores(1, j));
  }
}

TEST(DecodeUser, WorkedExampleUsersOneAndEight) {
  Worked w;
  auto store = sc::materialize_files(10, 9, 3, 900);
  auto trace = sc::simulate_delivery(w.instance, w.layout, w.placement);
  auto air = sc::encode_trace(trace, store);
  sc::CacheContent cache1(store, w.placement, 0);
  sc::CacheContent cache2(store, w.placement, 1);
  EXPECT_EQ(sc::decode_user(0, air, cache1, 0), store.file(0));
  EXPECT_EQ(sc::decode_user(7, air, cache2, 7), store.file(7));
}

TEST(VerifyInstance, WorkedExampleAllUsersDecode) {
  Worked w;
  auto report = sc::verify_instance(w.instance, w.layout, w.placement, 10, 5);
  ASSERT_EQ(report.users.size(), 10u);
  EXPECT_TRUE(report.all_decoded());
  EXPECT_EQ(report.trace.delay, sc::Rational(20, 9));
}

TEST(VerifyInstance, RandomInstancesDecode) {
  const std::vector<sc::SystemConfig> configs{
      {10, 10, 4, 2, {{2, 5}, {1, 5}, {1, 5}, {1, 5}}},
      {12, 4, 3, 1, {{1, 2}, {1, 3}, {1, 6}}},
      {8, 12, 5, 3, {{1, 4}, {1, 4}, {1, 4}, {1, 8}, {1, 8}}},
  };
  for (const auto& cfg : configs) {
    auto layout = sc::derive_layout(cfg);
    auto placement = sc::build_placement(layout, cfg.budget, cfg.files);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto mode = seed % 2 ? sc::DemandMode::RandomDemands : sc::DemandMode::WorstCase;
      if (mode == sc::DemandMode::WorstCase && cfg.files < cfg.users) mode = sc::DemandMode::RandomDemands;
      auto inst = sc::sample_population(cfg, seed, mode);
      auto report = sc::verify_instance(inst, layout, placement, cfg.files, seed, 2 * placement.subpackets());
      ASSERT_TRUE(report.all_decoded()) << "seed " << seed;
    }
  }
}

TEST(DecodeUser, MissingSideInformationIsReported) {
  Worked w;
  auto store = sc::materialize_files(10, 9, 3, 900);
  auto trace = sc::simulate_delivery(w.instance, w.layout, w.placement);
  auto air = sc::encode_trace(trace, store);
  // User 1 (cache 1) decoding with cache 2's content lacks the pieces it must cancel.
  sc::CacheContent wrong(store, w.placement, 1);
  try {
    sc::decode_user(0, air, wrong, 0);
    FAIL();
  } catch (const sc::Error& e) {
    EXPECT_EQ(e.code(), sc::ErrorCode::MissingSideInformation);
  }
}

TEST(DecodeUser, DroppedTransmissionIsIncomplete) {
  Worked w;
  auto store = sc::materialize_files(10, 9, 3, 900);
  auto trace = sc::simulate_delivery(w.instance, w.layout, w.placement);
  auto air = sc::encode_trace(trace, store);
  air.rounds[2].pop_back();  // user 6's last piece
  sc::CacheContent cache1(store, w.placement, 0);
  try {
    sc::decode_user(5, air, cache1, 5);
    FAIL();
  } catch (const sc::Error& e) {
    EXPECT_EQ(e.code(), sc::ErrorCode::IncompleteDelivery);
  }
}
