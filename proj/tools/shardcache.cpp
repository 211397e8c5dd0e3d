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

#include "shardcache/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace shardcache;
  cli::RunSpec spec;
  std::string t_list, v_list, augment_list, format = "csv", method, demands = "worst-case";

  CLI::App app{"Coded caching for shared caches with load-proportional sizes"};
  app.add_option("command", spec.command, "layout | place | simulate | verify | evaluate | tradeoff")
      ->required()
      ->check(CLI::IsMember({"layout", "place", "simulate", "verify", "evaluate", "tradeoff"}));
  app.add_option("--config", spec.config_path, "scenario file")->required();
  app.add_option("--seed", spec.seed, "master seed");
  app.add_option("--samples", spec.samples, "population vectors drawn by evaluate");
  app.add_option("--t", t_list, "budgets, e.g. 1..5 or 1,2,4 (default: config t)");
  app.add_option("--v", v_list, "fixed population vector, e.g. 6,2,1,1");
  app.add_option("--augment", augment_list, "virtual users per cache for tradeoff (default: one on the last cache)");
  app.add_option("--format", format, "evaluate output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", spec.out_path, "output file (evaluate report, simulate trace)");
  app.add_option("--max-enum", spec.max_enum, "cap on enumerated tuples / population vectors");
  app.add_option("--payload-bytes", spec.payload_bytes, "verify: bytes per synthetic file");
  app.add_option("--method", method, "evaluate: sbn (default) or exact")
      ->check(CLI::IsMember({"sbn", "exact"}));
  app.add_option("--demands", demands, "worst-case (distinct files) or random")
      ->check(CLI::IsMember({"worst-case", "random"}));
  app.add_flag("--table", spec.table, "place: print the subpacket table");

  try {
    app.parse(argc, argv);
    if (!t_list.empty()) spec.budgets = cli::parse_list(t_list);
    if (!v_list.empty()) spec.population = cli::parse_list(v_list);
    if (!augment_list.empty()) spec.augment = cli::parse_list(augment_list);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  spec.format = format == "json" ? cli::Format::Json : cli::Format::Csv;
  if (method == "exact") spec.method = Method::Exact;
  if (method == "sbn") spec.method = Method::Sbn;
  spec.demands = demands == "random" ? DemandMode::RandomDemands : DemandMode::WorstCase;
  return cli::run(spec, std::cout, std::cerr);
}
