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
 * @file placement.hpp
 * @brief Virtual-cache tuple families, storage allocation and the uncoded
 *        placement map.
 *
 * A file is split into S subpackets, one per tuple of virtual caches whose
 * physical owners are pairwise distinct. Physical cache c stores a subpacket
 * of every file when the subpacket's tuple contains one of c's virtual
 * caches; a tuple is counted once per physical cache even though the cache
 * owns several virtual caches.
 */

#pragma once

#include "shardcache/combinatorics.hpp"
#include "shardcache/error.hpp"
#include "shardcache/model.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace shardcache {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Lexicographically ordered family of equal-width tuples of virtual caches,
/// stored flat.
class TupleFamily {
 public:
  using Index = std::uint32_t;

  TupleFamily() = default;
  explicit TupleFamily(std::size_t width) : width_(width) {}

  std::size_t width() const { return width_; }
  std::size_t size() const { return width_ == 0 ? 0 : flat_.size() / width_; }
  bool empty() const { return size() == 0; }

  std::span<const Index> operator[](std::size_t i) const {
    return std::span<const Index>(flat_).subspan(i * width_, width_);
  }

  /// Rank of `tuple` in the family, if present.
  std::optional<std::size_t> index_of(std::span<const Index> tuple) const {
    if (tuple.size() != width_) return std::nullopt;
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      auto cand = (*this)[mid];
      if (std::lexicographical_compare(cand.begin(), cand.end(), tuple.begin(), tuple.end()))
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo < size() && std::ranges::equal((*this)[lo], tuple)) return lo;
    return std::nullopt;
  }

  void push_back(std::span<const Index> tuple) { flat_.insert(flat_.end(), tuple.begin(), tuple.end()); }

  bool operator==(const TupleFamily&) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<Index> flat_;
};

/// |family| from the closed form: e_size over the base loads.
inline BigInt tuple_count(const CacheLayout& layout, Count size) {
  return elementary_symmetric(layout.base(), size);
}

/// All `size`-tuples of virtual caches with pairwise distinct owners, in
/// lexicographic order. Rejects families larger than `cap`.
inline TupleFamily enumerate_tuples(const CacheLayout& layout, Count size,
                                    std::uint64_t cap = kDefaultEnumerationCap) {
  if (size < 1) throw Error(ErrorCode::InvalidArgument, "tuple size must be at least 1");
  if (size > static_cast<Count>(layout.caches()))
    throw Error(ErrorCode::SizeExceedsCaches,
                "tuple size " + std::to_string(size) + " exceeds the " +
                    std::to_string(layout.caches()) + " caches");
  BigInt expected = tuple_count(layout, size);
  if (expected > cap)
    throw Error(ErrorCode::EnumerationTooLarge,
                "family would hold " + expected.str() + " tuples (cap " + std::to_string(cap) +
                    ")");

  TupleFamily family(static_cast<std::size_t>(size));
  std::vector<TupleFamily::Index> tuple(static_cast<std::size_t>(size));
  const std::size_t virtuals = layout.virtual_count();
  const std::size_t caches = layout.caches();
  // Owners are non-decreasing in virtual index, so an increasing tuple with
  // distinct owners has strictly increasing owners.
  auto fill = [&](auto&& self, std::size_t depth, std::size_t from) -> void {
    if (depth == tuple.size()) {
      family.push_back(tuple);
      return;
    }
    for (std::size_t v = from; v < virtuals; ++v) {
      std::size_t owner = layout.owner_of(v);
      if (caches - owner < tuple.size() - depth) break;
      tuple[depth] = static_cast<TupleFamily::Index>(v);
      self(self, depth + 1, layout.first_virtual(owner + 1));
    }
  };
  fill(fill, 0, 0);
  return family;
}

/// S = |Q_t|, computed by the closed form (no enumeration).
inline BigInt subpacketization(const CacheLayout& layout, Count t) {
  return tuple_count(layout, t);
}

struct AllocationVector {
  std::vector<Rational> gamma;
};

/// γ_c = (tuples touching cache c) / S, exactly.
inline AllocationVector storage_allocation(const CacheLayout& layout, Count t) {
  BigInt s = subpacketization(layout, t);
  AllocationVector out;
  for (std::size_t c = 0; c < layout.caches(); ++c)
    out.gamma.push_back(
        make_rational(elementary_symmetric_containing(layout.base(), t, c), s));
  return out;
}

/// Placement of every file's subpackets. Files are not materialized here:
/// cache c holds F^i_j for every file i and every tuple index j in
/// per_cache[c].
struct PlacementMap {
  Count budget = 0;
  Count files = 0;
  TupleFamily tuples;
  std::vector<std::vector<std::size_t>> per_cache;

  std::size_t subpackets() const { return tuples.size(); }

  bool stores(std::size_t cache, std::size_t tuple_index) const {
    return std::ranges::binary_search(per_cache.at(cache), tuple_index);
  }
};

inline PlacementMap build_placement(const CacheLayout& layout, Count t, Count files,
                                    std::uint64_t cap = kDefaultEnumerationCap) {
  PlacementMap map;
  map.budget = t;
  map.files = files;
  map.tuples = enumerate_tuples(layout, t, cap);
  map.per_cache.resize(layout.caches());
  for (std::size_t j = 0; j < map.tuples.size(); ++j)
    for (auto v : map.tuples[j]) map.per_cache[layout.owner_of(v)].push_back(j);
  return map;
}

/// One line per tuple: "index,tuple,owning-caches", one-based, dash-joined,
/// e.g. "1,1-3,1-2".
inline void write_placement_table(std::ostream& out, const CacheLayout& layout,
                                  const PlacementMap& map) {
  for (std::size_t j = 0; j < map.tuples.size(); ++j) {
    out << j + 1 << ',';
    auto tuple = map.tuples[j];
    for (std::size_t i = 0; i < tuple.size(); ++i) out << (i ? "-" : "") << tuple[i] + 1;
    out << ',';
    for (std::size_t i = 0; i < tuple.size(); ++i)
      out << (i ? "-" : "") << layout.owner_of(tuple[i]) + 1;
    out << '\n';
  }
}

}  // namespace shardcache
