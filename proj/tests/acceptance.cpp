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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "shardcache/cli.hpp"
#include "shardcache/shardcache.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

namespace sc = shardcache;

namespace {

std::string scenario(const std::string& name) { return std::string(SHARDCACHE_SCENARIO_DIR) + "/" + name; }

struct Check {
  bool ok = true;
  std::string why;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<void(Check&)>& body) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0) {
    std::ostringstream limit;
    limit << "runtime " << secs << " s exceeds " << limit_seconds << " s";
    c.expect(secs < limit_seconds, limit.str());
  }
  std::cout << (c.ok ? "PASS" : "FAIL") << "  " << id << ". " << name << " (" << std::fixed
            << std::setprecision(2) << secs << " s)";
  if (!c.ok) std::cout << " - " << c.why;
  std::cout << std::endl;
  if (!c.ok) ++failures;
}

sc::SystemConfig config(sc::Count users, sc::Count files, sc::Count t, const sc::CountVector& loads) {
  sc::SystemConfig cfg{users, files, static_cast<sc::Count>(loads.size()), t, {}};
  for (sc::Count v : loads) cfg.intensities.push_back(sc::Rational(v, users));
  return sc::validate_config(cfg);
}

void worked_example(Check& c) {
  auto cfg = sc::load_scenario(scenario("worked_example.cfg"));
  auto layout = sc::derive_layout(cfg);
  c.expect(layout.alpha() == 2, "alpha != 2");
  c.expect(layout.base() == sc::CountVector{2, 1, 1, 1}, "base != [2,1,1,1]");
  c.expect(sc::subpacketization(layout, 2) == 9, "S != 9");
  auto gamma = sc::storage_allocation(layout, 2).gamma;
  c.expect(gamma == std::vector<sc::Rational>{{6, 9}, {4, 9}, {4, 9}, {4, 9}}, "gamma mismatch");

  sc::PopulationInstance inst{{6, 2, 1, 1}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
  auto plan = sc::partition_population(inst.population, layout);
  c.expect(plan.rounds == std::vector<sc::CountVector>{{2, 1, 1, 1}, {2, 1, 0, 0}, {2, 0, 0, 0}},
           "partition mismatch");
  auto placement = sc::build_placement(layout, 2, cfg.files);
  auto trace = sc::simulate_delivery(inst, layout, placement);
  c.expect(trace.rounds.size() == 3 && trace.rounds[0].size() == 7 && trace.rounds[1].size() == 7 &&
               trace.rounds[2].size() == 6,
           "rounds are not 7/7/6");
  // Virtual caches 3,4,5 are 0-based 2,3,4.
  const std::vector<sc::TupleFamily::Index> pruned{2, 3, 4};
  bool present_round3 = false, present_round2 = false;
  for (const auto& tx : trace.rounds[2]) present_round3 |= tx.tau == pruned;
  for (const auto& tx : trace.rounds[1]) present_round2 |= tx.tau == pruned;
  c.expect(!present_round3 && present_round2, "tau (3,4,5) not pruned in round 3 only");
  c.expect(trace.delay == sc::Rational(20, 9), "T(V) != 20/9");
  c.expect(sc::delay_formula(inst.population, layout, 2) == sc::Rational(20, 9), "closed form != 20/9");
}

void formula_vs_simulation(Check& c) {
  const std::vector<sc::SystemConfig> configs{
      config(10, 10, 2, {4, 2, 2, 2}),
      config(28, 28, 3, {8, 6, 6, 4, 2, 2}),
      config(60, 60, 4, {16, 12, 8, 8, 4, 4, 4, 4}),
      config(12, 12, 1, {6, 4, 2}),
      config(40, 40, 2, {10, 10, 8, 8, 4}),
      config(45, 45, 3, {15, 9, 6, 6, 3, 3, 3}),
  };
  std::size_t checked = 0, mismatches = 0;
  for (const auto& cfg : configs) {
    auto layout = sc::derive_layout(cfg);
    auto placement = sc::build_placement(layout, cfg.budget, 1);
    sc::DeliveryPlanner planner(layout, placement);
    sc::PopulationSampler sampler(cfg);
    std::mt19937_64 rng(1000 + cfg.users);
    for (int i = 0; i < 2000; ++i) {
      sc::PopulationInstance inst{sampler.draw_population(rng), {}};
      inst.demands.assign(static_cast<std::size_t>(cfg.users), 0);
      sc::DeliveryTrace trace;
      try {
        trace = planner.simulate(inst);
      } catch (const sc::Error& e) {
        if (e.code() != sc::ErrorCode::FormulaMismatch) throw;
        ++mismatches;
        continue;
      }
      if (trace.delay != sc::delay_formula(inst.population, layout, cfg.budget)) ++mismatches;
      ++checked;
    }
  }
  c.expect(checked + mismatches >= 10000, "fewer than 10^4 instances");
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
}

void decodability(Check& c) {
  const std::vector<sc::SystemConfig> configs{
      config(10, 10, 2, {4, 2, 2, 2}),
      config(12, 16, 1, {6, 4, 2}),
      config(16, 20, 3, {4, 4, 4, 2, 2}),
  };
  std::size_t instances = 0, failed = 0;
  for (const auto& cfg : configs) {
    auto layout = sc::derive_layout(cfg);
    auto placement = sc::build_placement(layout, cfg.budget, cfg.files);
    for (std::uint64_t seed = 0; seed < 350; ++seed) {
      auto mode = seed % 2 ? sc::DemandMode::RandomDemands : sc::DemandMode::WorstCase;
      auto inst = sc::sample_population(cfg, seed, mode);
      auto report = sc::verify_instance(inst, layout, placement, cfg.files, seed, 4 * placement.subpackets() + 3);
      ++instances;
      if (!report.all_decoded() || report.users.size() != static_cast<std::size_t>(cfg.users)) ++failed;
    }
  }
  c.expect(instances >= 1000, "fewer than 10^3 instances");
  c.expect(failed == 0, std::to_string(failed) + " instances failed to decode");
}

void deterministic_identities(Check& c) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 25; ++i) {
    const std::size_t caches = 2 + rng() % 6;
    const sc::Count alpha = 1 + static_cast<sc::Count>(rng() % 4);
    sc::CountVector expected(caches);
    for (auto& v : expected) v = alpha * (1 + static_cast<sc::Count>(rng() % 5));
    auto layout = sc::CacheLayout::from_expected(expected);
    for (sc::Count t = 1; t < static_cast<sc::Count>(caches); ++t) {
      c.expect(sc::deterministic_delivery_time(layout, t) == sc::delay_formula(expected, layout, t),
               "deterministic time != T(expected loads)");
      sc::BigInt gain = boost::multiprecision::pow(sc::BigInt(layout.alpha()), static_cast<unsigned>(t));
      c.expect(sc::subpacketization_unreduced(layout, t) == sc::subpacketization(layout, t) * gain,
               "S(expected) != S(base) * alpha^t");
    }
  }
  auto layout = sc::CacheLayout::from_expected({8, 6, 6, 4, 2, 2});
  for (sc::Count t = 1; t <= 3; ++t)
    c.expect(sc::make_rational(sc::subpacketization_unreduced(layout, t), sc::subpacketization(layout, t)) ==
                 sc::Rational(1 << t),
             "ratio on [8,6,6,4,2,2] is not 2^t");
}

void exact_vs_sbn(Check& c) {
  auto cfg = sc::load_scenario(scenario("worked_example.cfg"));
  auto layout = sc::derive_layout(cfg);
  auto ex = sc::exact_averages(cfg, layout, cfg.budget);
  c.expect(ex.compositions == 286, "composition count != 286");
  c.expect(ex.probability_mass == 1, "weights do not sum to 1");
  auto est = sc::sbn_average_delay(cfg, layout, 1000000, 2026);
  double gap = std::abs(sc::to_double(est.mean) - sc::to_double(ex.ours));
  std::ostringstream why;
  why << "|" << sc::to_decimal(est.mean) << " - " << sc::to_decimal(ex.ours) << "| = " << gap << " > 3 * "
      << est.std_error;
  c.expect(gap <= 3 * est.std_error, why.str());
}

void tiny_case(Check& c) {
  auto cfg = sc::load_scenario(scenario("tiny.cfg"));
  c.expect(sc::exact_average_delay(cfg, sc::derive_layout(cfg)) == sc::Rational(3, 4), "average != 3/4");
}

void desk_scale_trend(Check& c) {
  auto cfg = sc::load_scenario(scenario("desk_scale.cfg"));
  auto layout = sc::derive_layout(cfg);
  for (const auto& r : sc::sbn_sweep(cfg, layout, {1, 2, 3, 4, 5}, 10000, 1))
    c.expect(r.ours.mean <= r.uniform.mean, "ours > uniform at t = " + std::to_string(r.budget));
}

void virtual_user_tradeoff(Check& c) {
  for (sc::Count t = 1; t <= 3; ++t) {
    auto r = sc::virtual_user_tradeoff({20, 15, 15, 5, 5, 4}, {0, 0, 0, 0, 0, 1}, t);
    const std::string at = " at t = " + std::to_string(t);
    c.expect(r.alpha_before == 1 && r.alpha_after == 5, "alpha is not 1 -> 5" + at);
    c.expect(r.reduction_factor == static_cast<std::int64_t>(std::pow(5, t)), "reduction is not 5^t" + at);
    c.expect(r.delay_after >= r.delay_before, "delay decreased" + at);
  }
}

void determinism(Check& c) {
  std::string reference;
  for (unsigned workers : {1u, 2u, 3u, 8u}) {
    sc::cli::RunSpec spec;
    spec.command = "evaluate";
    spec.config_path = scenario("desk_scale.cfg");
    spec.budgets = {1, 2, 3, 4, 5};
    spec.samples = 20000;
    spec.seed = 314;
    spec.workers = workers;
    auto path = std::filesystem::temp_directory_path() / ("shardcache_accept_" + std::to_string(workers) + ".csv");
    spec.out_path = path.string();
    std::ostringstream out, err;
    c.expect(sc::cli::run(spec, out, err) == 0, "evaluate failed: " + err.str());
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::filesystem::remove(path);
    c.expect(!bytes.empty(), "empty CSV");
    if (reference.empty()) reference = bytes;
    c.expect(bytes == reference, "CSV differs with " + std::to_string(workers) + " workers");
  }
}

}  // namespace

int main() {
  criterion(1, "worked example reproduction", 1, worked_example);
  criterion(2, "closed form equals simulation on 1.2e4 random populations", 120, formula_vs_simulation);
  criterion(3, "byte-level decoding on 1050 random instances", 120, decodability);
  criterion(4, "fixed-association identities and alpha^t subpacketization law", 0, deterministic_identities);
  criterion(5, "exact average vs 1e6-sample estimate within 3 standard errors", 60, exact_vs_sbn);
  criterion(6, "two-user two-cache average delay is 3/4", 0, tiny_case);
  criterion(7, "desk-scale ordering against the uniform baseline", 300, desk_scale_trend);
  criterion(8, "one virtual user: alpha 1 -> 5, reduction 5^t", 0, virtual_user_tradeoff);
  criterion(9, "evaluate CSV identical across worker counts", 0, determinism);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
