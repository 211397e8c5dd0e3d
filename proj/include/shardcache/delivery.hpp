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
 * @file delivery.hpp
 * @brief Round-based XOR delivery and the delivery-time closed form.
 *
 * Each round seats at most base[c] users of cache c on c's virtual caches.
 * For every (t+1)-tuple tau of virtual caches with distinct owners the
 * server broadcasts the XOR, over the occupied seats s in tau, of the
 * seated user's requested file restricted to subpacket tau \ {s}. Tuples
 * with no occupied seat are skipped. Every transmission is one subpacket
 * long, so the delivery time is (transmissions) / S file units.
 */

#pragma once

#include "shardcache/combinatorics.hpp"
#include "shardcache/error.hpp"
#include "shardcache/model.hpp"
#include "shardcache/partition.hpp"
#include "shardcache/placement.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <vector>

namespace shardcache {

/// One XORed piece: `user` wants subpacket `subpacket` (index into Q_t) of
/// file `file`.
struct PayloadTerm {
  std::size_t user = 0;
  Count file = 0;
  std::size_t subpacket = 0;

  bool operator==(const PayloadTerm&) const = default;
};

struct Transmission {
  std::size_t tau_index = 0;                // index into Q_{t+1}
  std::vector<TupleFamily::Index> tau;
  std::vector<PayloadTerm> terms;           // in seat order within tau
};

struct DeliveryTrace {
  std::vector<std::vector<Transmission>> rounds;
  std::uint64_t total_transmissions = 0;
  std::uint64_t subpackets = 0;
  Rational delay;
};

/// Counts and delivery time straight from the closed form, without
/// enumerating any tuple family.
class DelayModel {
 public:
  DelayModel(const CacheLayout& layout, Count t)
      : layout_(&layout),
        budget_(t),
        subpackets_(elementary_symmetric(layout.base(), t)),
        full_round_(elementary_symmetric(layout.base(), t + 1)) {}

  const BigInt& subpackets() const { return subpackets_; }
  const BigInt& full_round_transmissions() const { return full_round_; }

  /// Transmissions in a round with round vector `round` (round <= base):
  /// all (t+1)-tuples minus the ones lying entirely on empty seats of the
  /// deficit caches.
  BigInt round_transmissions(const CountVector& round) const {
    RoundClass cls = classify_round(round, *layout_);
    if (cls.kind == RoundCase::Full) return full_round_;
    CountVector empty_seats;
    empty_seats.reserve(cls.deficit.size());
    for (std::size_t c : cls.deficit) empty_seats.push_back(layout_->base()[c] - round[c]);
    return full_round_ - elementary_symmetric(empty_seats, budget_ + 1);
  }

  BigInt transmissions(const CountVector& population) const {
    BigInt total = 0;
    for (const CountVector& round : partition_population(population, *layout_).rounds)
      total += round_transmissions(round);
    return total;
  }

  Rational delay(const CountVector& population) const {
    return make_rational(transmissions(population), subpackets_);
  }

 private:
  const CacheLayout* layout_;
  Count budget_;
  BigInt subpackets_;
  BigInt full_round_;
};

/// T(V) from the closed form, summed over the rounds of the greedy partition.
inline Rational delay_formula(const CountVector& population, const CacheLayout& layout, Count t) {
  return DelayModel(layout, t).delay(population);
}

/// Fixed association V = V̄: α full rounds.
inline Rational deterministic_delivery_time(const CacheLayout& layout, Count t) {
  return make_rational(layout.alpha() * elementary_symmetric(layout.base(), t + 1),
                       elementary_symmetric(layout.base(), t));
}

/// Seat of every user served in one round: occupant[v] is the user on
/// virtual cache v, seat_of maps back.
struct SeatAssignment {
  std::vector<std::optional<std::size_t>> occupant;
  std::map<std::size_t, std::size_t> seat_of;
};

/// The i-th user of cache c in this round takes the i-th virtual cache of c.
inline SeatAssignment assign_virtual_seats(const CountVector& round,
                                           const std::vector<std::vector<std::size_t>>& round_users,
                                           const CacheLayout& layout) {
  if (round.size() != layout.caches() || round_users.size() != layout.caches())
    throw Error(ErrorCode::InvalidArgument, "round vector has wrong length");
  SeatAssignment seats;
  seats.occupant.resize(layout.virtual_count());
  for (std::size_t c = 0; c < layout.caches(); ++c) {
    const auto& users = round_users[c];
    if (static_cast<Count>(users.size()) != round[c])
      throw Error(ErrorCode::InvalidArgument, "round user list disagrees with round vector");
    if (round[c] > layout.base()[c])
      throw Error(ErrorCode::TooManyUsersForRound,
                  "cache " + std::to_string(c + 1) + " has " + std::to_string(round[c]) +
                      " users in a round but only " + std::to_string(layout.base()[c]) +
                      " virtual caches");
    for (std::size_t i = 0; i < users.size(); ++i) {
      std::size_t seat = layout.first_virtual(c) + i;
      seats.occupant[seat] = users[i];
      seats.seat_of.emplace(users[i], seat);
    }
  }
  return seats;
}

/// Enumerates Q_{t+1} once and turns rounds into transmissions.
class DeliveryPlanner {
 public:
  DeliveryPlanner(const CacheLayout& layout, const PlacementMap& placement,
                  std::uint64_t cap = kDefaultEnumerationCap)
      : layout_(&layout),
        placement_(&placement),
        next_(enumerate_tuples(layout, placement.budget + 1, cap)) {}

  const TupleFamily& transmission_tuples() const { return next_; }

  std::vector<Transmission> generate_round(const SeatAssignment& seats,
                                           const std::vector<Count>& demands) const {
    std::vector<Transmission> out;
    std::vector<TupleFamily::Index> label(placement_->budget);
    for (std::size_t q = 0; q < next_.size(); ++q) {
      auto tau = next_[q];
      Transmission tx;
      for (std::size_t i = 0; i < tau.size(); ++i) {
        const auto& who = seats.occupant[tau[i]];
        if (!who) continue;
        std::size_t n = 0;
        for (std::size_t k = 0; k < tau.size(); ++k)
          if (k != i) label[n++] = tau[k];
        auto sub = placement_->tuples.index_of(label);
        if (!sub) throw Error(ErrorCode::FormulaMismatch, "subpacket label missing from Q_t");
        tx.terms.push_back(PayloadTerm{*who, demands.at(*who), *sub});
      }
      if (tx.terms.empty()) continue;
      tx.tau_index = q;
      tx.tau.assign(tau.begin(), tau.end());
      out.push_back(std::move(tx));
    }
    return out;
  }

  /// Runs every round of the greedy partition and checks the transmission
  /// count against the closed form.
  DeliveryTrace simulate(const PopulationInstance& instance) const {
    const CountVector& population = instance.population;
    if (population.size() != layout_->caches())
      throw Error(ErrorCode::InvalidArgument, "population vector has wrong length");
    const auto offsets = user_offsets(population);
    if (instance.demands.size() != offsets.back())
      throw Error(ErrorCode::InvalidArgument, "demand vector length differs from sum of V");

    DeliveryTrace trace;
    trace.subpackets = placement_->subpackets();
    CountVector served(population.size(), 0);
    for (const CountVector& round : partition_population(population, *layout_).rounds) {
      std::vector<std::vector<std::size_t>> users(population.size());
      for (std::size_t c = 0; c < population.size(); ++c) {
        for (Count i = 0; i < round[c]; ++i)
          users[c].push_back(offsets[c] + static_cast<std::size_t>(served[c] + i));
        served[c] += round[c];
      }
      auto txs = generate_round(assign_virtual_seats(round, users, *layout_), instance.demands);
      trace.total_transmissions += txs.size();
      trace.rounds.push_back(std::move(txs));
    }
    trace.delay = make_rational(BigInt(trace.total_transmissions), BigInt(trace.subpackets));
    Rational expected = delay_formula(population, *layout_, placement_->budget);
    if (trace.delay != expected)
      throw Error(ErrorCode::FormulaMismatch, "simulated delay " + to_fraction(trace.delay) +
                                                  " differs from closed form " +
                                                  to_fraction(expected));
    return trace;
  }

 private:
  const CacheLayout* layout_;
  const PlacementMap* placement_;
  TupleFamily next_;
};

inline DeliveryTrace simulate_delivery(const PopulationInstance& instance, const CacheLayout& layout,
                                       const PlacementMap& placement) {
  return DeliveryPlanner(layout, placement).simulate(instance);
}

/// One line per transmission: "round,tau,terms" with terms
/// "user:file:subpacket" joined by ';'. Everything one-based.
inline void write_trace(std::ostream& out, const DeliveryTrace& trace) {
  for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
    for (const Transmission& tx : trace.rounds[r]) {
      out << r + 1 << ',';
      for (std::size_t i = 0; i < tx.tau.size(); ++i) out << (i ? "-" : "") << tx.tau[i] + 1;
      out << ',';
      for (std::size_t i = 0; i < tx.terms.size(); ++i) {
        const PayloadTerm& term = tx.terms[i];
        out << (i ? ";" : "") << term.user + 1 << ':' << term.file + 1 << ':'
            << term.subpacket + 1;
      }
      out << '\n';
    }
  }
}

}  // namespace shardcache
