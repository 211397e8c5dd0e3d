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
 * @file codec.hpp
 * @brief Byte-level execution of placement and delivery.
 *
 * Synthetic files are split into S equal subpackets, caches are filled per
 * the placement map, the server XORs real subpackets into broadcast
 * payloads, and each user rebuilds its file from nothing but its own cache
 * and the broadcast.
 */

#pragma once

#include "shardcache/delivery.hpp"
#include "shardcache/error.hpp"
#include "shardcache/placement.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace shardcache {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kDefaultPayloadBytes = 9000;

class FileStore {
 public:
  FileStore(std::size_t subpackets, std::size_t subpacket_length, std::vector<Bytes> files)
      : subpackets_(subpackets), subpacket_length_(subpacket_length), files_(std::move(files)) {}

  std::size_t file_count() const { return files_.size(); }
  std::size_t file_length() const { return subpackets_ * subpacket_length_; }
  std::size_t subpackets() const { return subpackets_; }
  std::size_t subpacket_length() const { return subpacket_length_; }

  const Bytes& file(Count index) const { return files_.at(static_cast<std::size_t>(index)); }

  std::span<const std::uint8_t> subpacket(Count file_index, std::size_t j) const {
    return std::span<const std::uint8_t>(file(file_index)).subspan(j * subpacket_length_,
                                                                   subpacket_length_);
  }

 private:
  std::size_t subpackets_;
  std::size_t subpacket_length_;
  std::vector<Bytes> files_;
};

/// N pseudo-random files of `payload_bytes` bytes each, zero-padded to the
/// next multiple of S. File i depends only on (seed, i).
inline FileStore materialize_files(Count files, std::size_t subpackets, std::uint64_t seed,
                                   std::size_t payload_bytes) {
  if (subpackets == 0 || payload_bytes < subpackets)
    throw Error(ErrorCode::PayloadTooSmall, "payload of " + std::to_string(payload_bytes) +
                                                " bytes cannot hold " +
                                                std::to_string(subpackets) + " subpackets");
  const std::size_t sub_len = (payload_bytes + subpackets - 1) / subpackets;
  std::vector<Bytes> out;
  out.reserve(static_cast<std::size_t>(files));
  for (Count i = 0; i < files; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    Bytes data(sub_len * subpackets, 0);
    for (std::size_t b = 0; b < payload_bytes; b += 8) {
      std::uint64_t word = rng();
      for (std::size_t k = 0; k < 8 && b + k < payload_bytes; ++k)
        data[b + k] = static_cast<std::uint8_t>(word >> (8 * k));
    }
    out.push_back(std::move(data));
  }
  return FileStore(subpackets, sub_len, std::move(out));
}

/// The bytes one physical cache holds: F^i_j for every file i and every
/// subpacket j the placement assigns to it.
class CacheContent {
 public:
  CacheContent(const FileStore& store, const PlacementMap& placement, std::size_t cache)
      : subpackets_(store.subpackets()) {
    for (Count i = 0; i < static_cast<Count>(store.file_count()); ++i)
      for (std::size_t j : placement.per_cache.at(cache)) {
        auto piece = store.subpacket(i, j);
        pieces_.emplace(key(i, j), Bytes(piece.begin(), piece.end()));
      }
  }

  const Bytes* find(Count file, std::size_t subpacket) const {
    auto it = pieces_.find(key(file, subpacket));
    return it == pieces_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return pieces_.size(); }

 private:
  std::uint64_t key(Count file, std::size_t subpacket) const {
    return static_cast<std::uint64_t>(file) * subpackets_ + subpacket;
  }

  std::size_t subpackets_;
  std::unordered_map<std::uint64_t, Bytes> pieces_;
};

struct EncodedTransmission {
  Transmission header;
  Bytes payload;
};

/// What goes over the air: transmission headers with their XORed payloads.
struct Broadcast {
  std::size_t subpackets = 0;
  std::size_t subpacket_length = 0;
  std::vector<std::vector<EncodedTransmission>> rounds;
};

inline void xor_into(Bytes& acc, std::span<const std::uint8_t> piece) {
  for (std::size_t b = 0; b < acc.size(); ++b) acc[b] ^= piece[b];
}

inline Broadcast encode_trace(const DeliveryTrace& trace, const FileStore& store) {
  Broadcast out;
  out.subpackets = store.subpackets();
  out.subpacket_length = store.subpacket_length();
  for (const auto& round : trace.rounds) {
    std::vector<EncodedTransmission> encoded;
    encoded.reserve(round.size());
    for (const Transmission& tx : round) {
      EncodedTransmission e{tx, Bytes(store.subpacket_length(), 0)};
      for (const PayloadTerm& term : tx.terms)
        xor_into(e.payload, store.subpacket(term.file, term.subpacket));
      encoded.push_back(std::move(e));
    }
    out.rounds.push_back(std::move(encoded));
  }
  return out;
}

/// Rebuilds `request` for `user` from its cache and the broadcast alone.
inline Bytes decode_user(std::size_t user, const Broadcast& broadcast, const CacheContent& cache,
                         Count request) {
  std::unordered_map<std::size_t, Bytes> recovered;
  for (const auto& round : broadcast.rounds) {
    for (const EncodedTransmission& tx : round) {
      const PayloadTerm* mine = nullptr;
      for (const PayloadTerm& term : tx.header.terms)
        if (term.user == user) mine = &term;
      if (!mine) continue;
      Bytes piece = tx.payload;
      for (const PayloadTerm& term : tx.header.terms) {
        if (&term == mine) continue;
        const Bytes* side = cache.find(term.file, term.subpacket);
        if (!side)
          throw Error(ErrorCode::MissingSideInformation,
                      "user " + std::to_string(user + 1) + " lacks F^" +
                          std::to_string(term.file + 1) + " subpacket " +
                          std::to_string(term.subpacket + 1));
        xor_into(piece, *side);
      }
      recovered[mine->subpacket] = std::move(piece);
    }
  }
  Bytes file;
  file.reserve(broadcast.subpackets * broadcast.subpacket_length);
  for (std::size_t j = 0; j < broadcast.subpackets; ++j) {
    const Bytes* piece = cache.find(request, j);
    if (!piece) {
      auto it = recovered.find(j);
      if (it == recovered.end())
        throw Error(ErrorCode::IncompleteDelivery, "user " + std::to_string(user + 1) +
                                                       " never receives subpacket " +
                                                       std::to_string(j + 1));
      piece = &it->second;
    }
    file.insert(file.end(), piece->begin(), piece->end());
  }
  return file;
}

struct UserVerdict {
  std::size_t user = 0;
  std::size_t cache = 0;
  Count file = 0;
  bool decoded = false;
  std::string detail;
};

struct VerificationReport {
  DeliveryTrace trace;
  std::vector<UserVerdict> users;

  bool all_decoded() const {
    for (const auto& u : users)
      if (!u.decoded) return false;
    return true;
  }
};

/// Full byte-level run: materialize files, fill caches, simulate, encode and
/// decode for every user.
inline VerificationReport verify_instance(const PopulationInstance& instance, const CacheLayout& layout,
                                          const PlacementMap& placement, Count files,
                                          std::uint64_t seed,
                                          std::size_t payload_bytes = kDefaultPayloadBytes) {
  VerificationReport report;
  report.trace = simulate_delivery(instance, layout, placement);
  FileStore store = materialize_files(files, placement.subpackets(), seed, payload_bytes);
  Broadcast air = encode_trace(report.trace, store);
  const auto offsets = user_offsets(instance.population);
  for (std::size_t c = 0; c < layout.caches(); ++c) {
    if (offsets[c] == offsets[c + 1]) continue;
    CacheContent cache(store, placement, c);
    for (std::size_t u = offsets[c]; u < offsets[c + 1]; ++u) {
      UserVerdict v{u, c, instance.demands[u], false, {}};
      try {
        Bytes got = decode_user(u, air, cache, v.file);
        v.decoded = got == store.file(v.file);
        if (!v.decoded) v.detail = "decoded bytes differ from the requested file";
      } catch (const Error& e) {
        v.detail = e.what();
      }
      report.users.push_back(std::move(v));
    }
  }
  return report;
}

}  // namespace shardcache
