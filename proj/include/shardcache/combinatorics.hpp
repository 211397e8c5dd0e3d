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

#include "shardcache/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace shardcache {

using Count = std::int64_t;
using CountVector = std::vector<Count>;

inline BigInt binomial(Count n, Count k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (Count i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline BigInt factorial(Count n) {
  BigInt r = 1;
  for (Count i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Sum over all k-subsets of `values` of the product of the chosen entries,
/// i.e. the elementary symmetric polynomial e_k. e_0 = 1; e_k = 0 for k > n.
inline BigInt elementary_symmetric(std::span<const Count> values, Count k) {
  if (k < 0) return 0;
  if (k > static_cast<Count>(values.size())) return 0;
  std::vector<BigInt> e(static_cast<std::size_t>(k) + 1, BigInt(0));
  e[0] = 1;
  Count seen = 0;
  for (Count x : values) {
    ++seen;
    for (Count j = std::min(seen, k); j >= 1; --j) e[j] += e[j - 1] * x;
  }
  return e[k];
}

/// e_k restricted to the subsets that contain position `index`.
inline BigInt elementary_symmetric_containing(std::span<const Count> values, Count k,
                                              std::size_t index) {
  if (k < 1) return 0;
  CountVector rest;
  rest.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (i != index) rest.push_back(values[i]);
  return values[index] * elementary_symmetric(rest, k - 1);
}

/// Visits every k-subset of {0, ..., n-1} in lexicographic order. The
/// callback receives a span of strictly increasing indices.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    fn(std::span<const std::size_t>(idx));
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Iterates the weak compositions of `total` into `parts` non-negative
/// integers in ascending lexicographic order, from [0,...,0,total] to
/// [total,0,...,0].
class CompositionCursor {
 public:
  CompositionCursor(Count total, std::size_t parts)
      : current_(parts, 0), exhausted_(parts == 0) {
    if (!exhausted_) current_.back() = total;
  }

  const CountVector& current() const { return current_; }
  bool exhausted() const { return exhausted_; }

  void advance() {
    if (exhausted_) return;
    const std::size_t n = current_.size();
    // Rightmost position with mass strictly to its right.
    std::size_t j = n;
    for (std::size_t q = n; q-- > 1;) {
      if (current_[q] > 0) {
        j = q;
        break;
      }
    }
    if (j == n) {
      exhausted_ = true;
      return;
    }
    Count tail = 0;
    for (std::size_t q = j; q < n; ++q) {
      tail += current_[q];
      current_[q] = 0;
    }
    ++current_[j - 1];
    current_.back() = tail - 1;
  }

  static BigInt count(Count total, std::size_t parts) {
    if (parts == 0) return total == 0 ? 1 : 0;
    return binomial(total + static_cast<Count>(parts) - 1, static_cast<Count>(parts) - 1);
  }

 private:
  CountVector current_;
  bool exhausted_;
};

}  // namespace shardcache
