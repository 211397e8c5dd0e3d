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

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <ios>
#include <stdexcept>
#include <string>
#include <string_view>

namespace shardcache {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  return Rational(num, den);
}

namespace detail {

inline BigInt parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
  BigInt v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("malformed number '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace detail

/// Parses "num/den", an integer, or a finite decimal ("0.15") into an exact
/// rational. Decimals convert exactly (0.15 == 3/20).
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_digits(s.substr(0, slash), text);
    BigInt den = detail::parse_digits(s.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Rational(num, den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty())
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    BigInt whole = ip.empty() ? BigInt(0) : detail::parse_digits(ip, text);
    BigInt frac = fp.empty() ? BigInt(0) : detail::parse_digits(fp, text);
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(fp.size()));
    value = Rational(whole * scale + frac, scale);
  } else {
    value = Rational(detail::parse_digits(s, text));
  }
  return negative ? Rational(-value) : value;
}

/// Always "num/den", including integers ("3/1").
inline std::string to_fraction(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Decimal rendering with `digits` significant digits.
inline std::string to_decimal(const Rational& r, int digits = 12) {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  Dec v(numerator(r));
  v /= Dec(denominator(r));
  return v.str(digits, std::ios_base::fmtflags(0));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Decimal rendering of a double with `digits` significant digits.
inline std::string to_decimal(double v, int digits = 12) {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  return Dec(v).str(digits, std::ios_base::fmtflags(0));
}

}  // namespace shardcache
