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

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace shardcache {

/// Worker count: SHARDCACHE_THREADS if set to a positive integer, else the
/// machine's hardware concurrency (at least 1).
inline unsigned default_worker_count() {
  if (const char* env = std::getenv("SHARDCACHE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Seed of block `block` under `master`. Depends on nothing else, so the
/// sample stream is independent of how blocks are spread over workers.
inline std::mt19937_64 block_rng(std::uint64_t master, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                    0x5eedu};
  return std::mt19937_64(seq);
}

/// Computes fn(b) for every block b in [0, blocks) on up to `workers`
/// threads. Results come back indexed by block.
template <typename Result, typename Fn>
std::vector<Result> map_blocks(std::size_t blocks, unsigned workers, Fn&& fn) {
  std::vector<Result> results(blocks);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(blocks, 1))));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) results[b] = fn(b);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next++; b < blocks; b = next++) {
        try {
          results[b] = fn(b);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace shardcache
