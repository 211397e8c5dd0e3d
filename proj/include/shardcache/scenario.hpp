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
 * @file scenario.hpp
 * @brief Scenario config files.
 *
 * One `key = value` pair per line, `#` starts a comment:
 *
 *     K = 10
 *     N = 10
 *     lambda = 4
 *     t = 2
 *     p = [0.4, 1/5, "0.2", 1/5]
 *
 * Intensities are exact: "num/den" strings or decimals (0.15 is 3/20).
 */

#pragma once

#include "shardcache/error.hpp"
#include "shardcache/model.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

namespace shardcache {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string where(const std::string& source, std::size_t line, std::string_view field) {
  std::string out = source + ":" + std::to_string(line);
  if (!field.empty()) out += ": field '" + std::string(field) + "'";
  return out;
}

inline Count parse_count(std::string_view v, const std::string& loc) {
  Count out = 0;
  if (v.empty()) throw Error(ErrorCode::ConfigParse, loc + ": expected an integer");
  for (char c : v) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw Error(ErrorCode::ConfigParse,
                  loc + ": expected a non-negative integer, got '" + std::string(v) + "'");
    if (out > (std::numeric_limits<Count>::max() - 9) / 10)
      throw Error(ErrorCode::ConfigParse, loc + ": integer out of range");
    out = out * 10 + (c - '0');
  }
  return out;
}

inline std::vector<Rational> parse_intensity_list(std::string_view v, const std::string& loc) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw Error(ErrorCode::ConfigParse, loc + ": expected a list like [0.5, 1/2]");
  v = v.substr(1, v.size() - 2);
  std::vector<Rational> out;
  if (trim(v).empty()) return out;
  std::size_t start = 0;
  while (start <= v.size()) {
    std::size_t comma = v.find(',', start);
    std::string_view item = trim(v.substr(start, comma == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : comma - start));
    if (item.size() >= 2 && item.front() == '"' && item.back() == '"')
      item = item.substr(1, item.size() - 2);
    try {
      out.push_back(parse_rational(item));
    } catch (const std::invalid_argument& e) {
      throw Error(ErrorCode::ConfigParse,
                  loc + ": entry " + std::to_string(out.size() + 1) + ": " + e.what());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

/// Parses a scenario; throws ConfigParse with "source:line: field" context.
/// The result is not yet validated (see validate_config / load_scenario).
inline SystemConfig parse_scenario(std::istream& in, const std::string& source = "<config>") {
  SystemConfig cfg;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::ConfigParse,
                  detail::where(source, line_no, "") + ": expected 'key = value'");
    std::string key(detail::trim(line.substr(0, eq)));
    std::string_view value = detail::trim(line.substr(eq + 1));
    std::string loc = detail::where(source, line_no, key);
    if (auto it = seen.find(key); it != seen.end())
      throw Error(ErrorCode::ConfigParse,
                  loc + ": duplicate (first set on line " + std::to_string(it->second) + ")");
    if (key == "K") {
      cfg.users = detail::parse_count(value, loc);
    } else if (key == "N") {
      cfg.files = detail::parse_count(value, loc);
    } else if (key == "lambda") {
      cfg.caches = detail::parse_count(value, loc);
    } else if (key == "t") {
      cfg.budget = detail::parse_count(value, loc);
    } else if (key == "p") {
      cfg.intensities = detail::parse_intensity_list(value, loc);
    } else {
      throw Error(ErrorCode::ConfigParse, loc + ": unknown field");
    }
    seen.emplace(std::move(key), line_no);
  }
  for (const char* required : {"K", "N", "lambda", "t", "p"})
    if (!seen.contains(required))
      throw Error(ErrorCode::ConfigParse,
                  source + ": missing field '" + std::string(required) + "'");
  return cfg;
}

inline SystemConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, path + ": cannot open file");
  return validate_config(parse_scenario(in, path));
}

inline std::string format_scenario(const SystemConfig& cfg) {
  std::ostringstream out;
  out << "K = " << cfg.users << "\nN = " << cfg.files << "\nlambda = " << cfg.caches
      << "\nt = " << cfg.budget << "\np = [";
  for (std::size_t i = 0; i < cfg.intensities.size(); ++i)
    out << (i ? ", " : "") << to_fraction(cfg.intensities[i]);
  out << "]\n";
  return out.str();
}

}  // namespace shardcache
