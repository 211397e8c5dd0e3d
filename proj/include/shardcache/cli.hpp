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
 * @file cli.hpp
 * @brief Command driver behind the `shardcache` executable.
 *
 * Commands: layout, place, simulate, verify, evaluate, tradeoff. Every
 * rational is printed as "num/den" followed by a 12-significant-digit
 * decimal, except in the evaluate CSV whose columns are plain decimals.
 */

#pragma once

#include "shardcache/codec.hpp"
#include "shardcache/delivery.hpp"
#include "shardcache/evaluate.hpp"
#include "shardcache/model.hpp"
#include "shardcache/placement.hpp"
#include "shardcache/scenario.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace shardcache::cli {

enum class Format { Csv, Json };

struct RunSpec {
  std::string command;
  std::string config_path;
  std::uint64_t seed = 1;
  std::uint64_t samples = 10000;
  std::vector<Count> budgets;                 // --t; empty means the config's t
  std::optional<CountVector> population;      // --v
  CountVector augment;                        // --augment (tradeoff)
  Format format = Format::Csv;
  std::string out_path;                       // empty: write to the output stream
  std::uint64_t max_enum = kDefaultEnumerationCap;
  std::size_t payload_bytes = kDefaultPayloadBytes;
  std::optional<Method> method;               // evaluate; default sbn
  DemandMode demands = DemandMode::WorstCase;
  bool table = false;                         // place: print the tuple table
  unsigned workers = 0;                       // 0: SHARDCACHE_THREADS or hardware
};

/// "1..5", "1,3,4" or a mix such as "1,3..5".
inline std::vector<Count> parse_list(const std::string& text) {
  std::vector<Count> out;
  std::stringstream ss(text);
  std::string item;
  auto number = [&](const std::string& s) -> Count {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size())
      throw Error(ErrorCode::InvalidArgument, "bad list entry '" + s + "' in '" + text + "'");
    return static_cast<Count>(v);
  };
  while (std::getline(ss, item, ',')) {
    item = std::string(detail::trim(item));
    if (auto dots = item.find(".."); dots != std::string::npos) {
      Count lo = number(item.substr(0, dots));
      Count hi = number(item.substr(dots + 2));
      if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty range '" + item + "'");
      for (Count v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(number(item));
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty list");
  return out;
}

inline std::string show(const Rational& r) { return to_fraction(r) + " (" + to_decimal(r) + ")"; }

template <typename Vec>
std::string join(const Vec& v, const char* sep = ",") {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? sep : "") << v[i];
  return out.str();
}

inline std::string show_population(const CountVector& v) { return "[" + join(v) + "]"; }

inline nlohmann::json big_to_json(const BigInt& v) {
  if (v >= 0 && v <= BigInt(std::numeric_limits<std::uint64_t>::max()))
    return v.convert_to<std::uint64_t>();
  return v.str();
}

inline nlohmann::json rational_to_json(const Rational& r) {
  return {{"fraction", to_fraction(r)}, {"decimal", to_decimal(r)}};
}

inline void write_csv(std::ostream& out, const std::vector<EvaluationReport>& reports) {
  out << "t,mean_ours,stderr_ours,mean_uniform,stderr_uniform,S_ours,S_soa,alpha\n";
  for (const auto& r : reports) {
    out << r.budget << ',' << to_decimal(r.mean.mean) << ',' << to_decimal(r.mean.std_error) << ','
        << to_decimal(r.baseline.mean) << ',' << to_decimal(r.baseline.std_error) << ','
        << r.subpacketization_ours.str() << ',' << r.subpacketization_soa.str() << ',' << r.alpha
        << '\n';
  }
}

inline void write_json(std::ostream& out, const std::vector<EvaluationReport>& reports) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : reports) {
    const bool sbn = r.method == Method::Sbn;
    nlohmann::json row = {
        {"method", sbn ? "sbn" : "exact"},
        {"t", r.budget},
        {"meanDelay", rational_to_json(r.mean.mean)},
        {"baselineMeanDelay", rational_to_json(r.baseline.mean)},
        {"subpacketizationOurs", big_to_json(r.subpacketization_ours)},
        {"subpacketizationSoA", big_to_json(r.subpacketization_soa)},
        {"alpha", r.alpha},
        {"alphaGain", big_to_json(r.alpha_gain)},
    };
    if (sbn) {
      row["sampleCount"] = r.mean.samples;
      row["stderr"] = to_decimal(r.mean.std_error);
      row["baselineStderr"] = to_decimal(r.baseline.std_error);
    }
    doc.push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

namespace detail {

inline std::vector<Count> budgets_of(const RunSpec& spec, const SystemConfig& cfg) {
  std::vector<Count> ts = spec.budgets.empty() ? std::vector<Count>{cfg.budget} : spec.budgets;
  for (Count t : ts)
    if (t < 1 || t >= cfg.caches)
      throw Error(ErrorCode::BadBudget, "t = " + std::to_string(t) + " is outside [1, " +
                                            std::to_string(cfg.caches - 1) + "]");
  return ts;
}

inline PopulationInstance instance_of(const RunSpec& spec, const SystemConfig& cfg) {
  if (!spec.population) return sample_population(cfg, spec.seed, spec.demands);
  const CountVector& v = *spec.population;
  if (static_cast<Count>(v.size()) != cfg.caches)
    throw Error(ErrorCode::InvalidArgument, "--v needs " + std::to_string(cfg.caches) + " entries");
  Count total = 0;
  for (Count x : v) {
    if (x < 0) throw Error(ErrorCode::InvalidArgument, "--v entries must be non-negative");
    total += x;
  }
  if (total != cfg.users)
    throw Error(ErrorCode::InvalidArgument,
                "--v sums to " + std::to_string(total) + ", expected K = " + std::to_string(cfg.users));
  PopulationInstance inst{v, std::vector<Count>(static_cast<std::size_t>(total))};
  if (spec.demands == DemandMode::WorstCase) {
    if (cfg.files < cfg.users)
      throw Error(ErrorCode::WorstCaseNeedsEnoughFiles, "worst-case demands need N >= K");
    for (Count k = 0; k < total; ++k) inst.demands[k] = k;
  } else {
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<Count> file(0, cfg.files - 1);
    for (Count& d : inst.demands) d = file(rng);
  }
  return inst;
}

inline void cmd_layout(const SystemConfig& cfg, std::ostream& out) {
  CacheLayout layout = derive_layout(cfg);
  out << "expected loads: " << show_population(layout.expected()) << '\n'
      << "alpha: " << layout.alpha() << '\n'
      << "base loads: " << show_population(layout.base()) << '\n'
      << "virtual caches: " << layout.virtual_count() << '\n';
  for (std::size_t c = 0; c < layout.caches(); ++c) {
    out << "cache " << c + 1 << ": virtual caches";
    for (Count i = 0; i < layout.base()[c]; ++i) out << ' ' << layout.first_virtual(c) + i + 1;
    out << '\n';
  }
}

inline void cmd_place(const RunSpec& spec, const SystemConfig& cfg, std::ostream& out) {
  CacheLayout layout = derive_layout(cfg);
  for (Count t : budgets_of(spec, cfg)) {
    out << "t = " << t << '\n' << "subpackets S: " << subpacketization(layout, t).str() << '\n';
    AllocationVector alloc = storage_allocation(layout, t);
    for (std::size_t c = 0; c < alloc.gamma.size(); ++c)
      out << "gamma_" << c + 1 << ": " << show(alloc.gamma[c]) << '\n';
    if (spec.table) {
      PlacementMap map = build_placement(layout, t, cfg.files, spec.max_enum);
      out << "index,tuple,owning-caches\n";
      write_placement_table(out, layout, map);
    }
  }
}

inline void cmd_simulate(const RunSpec& spec, const SystemConfig& cfg, std::ostream& out) {
  CacheLayout layout = derive_layout(cfg);
  const Count t = budgets_of(spec, cfg).front();
  PopulationInstance inst = instance_of(spec, cfg);
  PlacementMap map = build_placement(layout, t, cfg.files, spec.max_enum);
  DeliveryTrace trace = DeliveryPlanner(layout, map, spec.max_enum).simulate(inst);
  RoundPlan plan = partition_population(inst.population, layout);
  out << "population: " << show_population(inst.population) << '\n'
      << "rounds: " << plan.beta() << '\n';
  for (std::size_t j = 0; j < plan.rounds.size(); ++j)
    out << "round " << j + 1 << ": " << show_population(plan.rounds[j]) << " -> "
        << trace.rounds[j].size() << " transmissions\n";
  out << "transmissions: " << trace.total_transmissions << '\n'
      << "subpackets S: " << trace.subpackets << '\n'
      << "T(V) = " << show(trace.delay) << '\n'
      << "closed form T(V) = " << show(delay_formula(inst.population, layout, t)) << '\n';
  if (!spec.out_path.empty()) {
    std::ofstream file(spec.out_path);
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + spec.out_path);
    file << "round,tau,terms\n";
    write_trace(file, trace);
  }
}

inline int cmd_verify(const RunSpec& spec, const SystemConfig& cfg, std::ostream& out) {
  CacheLayout layout = derive_layout(cfg);
  const Count t = budgets_of(spec, cfg).front();
  PopulationInstance inst = instance_of(spec, cfg);
  PlacementMap map = build_placement(layout, t, cfg.files, spec.max_enum);
  VerificationReport report =
      verify_instance(inst, layout, map, cfg.files, spec.seed, spec.payload_bytes);
  out << "population: " << show_population(inst.population) << '\n'
      << "T(V) = " << show(report.trace.delay) << '\n';
  std::size_t failed = 0;
  for (const UserVerdict& v : report.users) {
    out << "user " << v.user + 1 << " (cache " << v.cache + 1 << ", file " << v.file + 1
        << "): " << (v.decoded ? "pass" : "FAIL");
    if (!v.decoded) {
      out << " - " << v.detail;
      ++failed;
    }
    out << '\n';
  }
  out << (failed == 0 ? "all users decoded\n"
                      : std::to_string(failed) + " user(s) failed to decode\n");
  return failed == 0 ? 0 : 3;
}

inline void cmd_evaluate(const RunSpec& spec, const SystemConfig& cfg, std::ostream& out) {
  CacheLayout layout = derive_layout(cfg);
  auto reports = evaluate_sweep(cfg, layout, budgets_of(spec, cfg), spec.method.value_or(Method::Sbn),
                                spec.samples, spec.seed, spec.workers, spec.max_enum);
  std::ostringstream body;
  if (spec.format == Format::Csv)
    write_csv(body, reports);
  else
    write_json(body, reports);
  if (spec.out_path.empty()) {
    out << body.str();
    return;
  }
  std::ofstream file(spec.out_path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + spec.out_path);
  file << body.str();
  out << "wrote " << reports.size() << " row(s) to " << spec.out_path << '\n';
}

inline void cmd_tradeoff(const RunSpec& spec, const SystemConfig& cfg, std::ostream& out) {
  CacheLayout layout = derive_layout(cfg);
  CountVector augment = spec.augment;
  if (augment.empty()) {
    augment.assign(layout.caches(), 0);
    augment.back() = 1;
  }
  out << "expected loads: " << show_population(layout.expected()) << '\n'
      << "augment: " << show_population(augment) << '\n';
  for (Count t : budgets_of(spec, cfg)) {
    TradeoffResult r = virtual_user_tradeoff(layout.expected(), augment, t);
    out << "t = " << t << '\n'
        << "  alpha: " << r.alpha_before << " -> " << r.alpha_after << '\n'
        << "  S: " << r.subpacketization_before.str() << " -> " << r.subpacketization_after.str()
        << '\n'
        << "  S ratio before/after: " << show(r.subpacketization_ratio) << '\n'
        << "  reduction factor (alpha^t): " << show(r.reduction_factor) << '\n'
        << "  delay: " << show(r.delay_before) << " -> " << show(r.delay_after) << '\n';
  }
}

}  // namespace detail

/// Executes one command. Returns the process exit code; diagnostics go to
/// `err`.
inline int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    if (spec.samples < 1) throw Error(ErrorCode::InvalidArgument, "--samples must be at least 1");
    SystemConfig cfg = load_scenario(spec.config_path);
    if (spec.command == "layout") {
      detail::cmd_layout(cfg, out);
    } else if (spec.command == "place") {
      detail::cmd_place(spec, cfg, out);
    } else if (spec.command == "simulate") {
      detail::cmd_simulate(spec, cfg, out);
    } else if (spec.command == "verify") {
      return detail::cmd_verify(spec, cfg, out);
    } else if (spec.command == "evaluate") {
      detail::cmd_evaluate(spec, cfg, out);
    } else if (spec.command == "tradeoff") {
      detail::cmd_tradeoff(spec, cfg, out);
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown command '" + spec.command + "'");
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigParse ? 2 : 1;
  }
  return 0;
}

}  // namespace shardcache::cli
