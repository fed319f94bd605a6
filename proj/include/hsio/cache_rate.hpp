// Copyright 2026 The hsio Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "hsio/error.hpp"

namespace hsio {

/// Fraction of dataset files pinned on the local tier, held as an exact
/// rational so that sweep points like 65% never pick up binary rounding.
class CacheRate {
 public:
  constexpr CacheRate() = default;

  static CacheRate from_fraction(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw InvalidArgument("cache rate denominator must be positive");
    if (num < 0 || num > den) throw InvalidArgument("cache rate must lie in [0, 1]");
    const std::int64_t g = std::gcd(num, den);
    CacheRate r;
    r.num_ = num / g;
    r.den_ = den / g;
    return r;
  }

  /// Parses a plain decimal percentage ("65", "62.5") exactly.
  static CacheRate parse_percent(std::string_view text) {
    if (text.empty()) throw InvalidArgument("empty cache rate");
    std::int64_t num = 0;
    std::int64_t den = 100;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : text) {
      if (c == '.') {
        if (seen_dot) throw InvalidArgument("malformed cache rate '" + std::string(text) + "'");
        seen_dot = true;
        continue;
      }
      if (c < '0' || c > '9') {
        throw InvalidArgument("malformed cache rate '" + std::string(text) + "'");
      }
      seen_digit = true;
      if (num > (INT64_MAX / 100)) throw InvalidArgument("cache rate has too many digits");
      num = num * 10 + (c - '0');
      if (seen_dot) {
        if (den > INT64_MAX / 100) throw InvalidArgument("cache rate has too many digits");
        den *= 10;
      }
    }
    if (!seen_digit) throw InvalidArgument("malformed cache rate '" + std::string(text) + "'");
    return from_fraction(num, den);
  }

  /// Converts a percentage given as a double via its shortest round-trip
  /// decimal, so 65.0 and 62.5 map to 65/100 and 5/8 exactly.
  static CacheRate from_percent(double pct) {
    if (!(pct >= 0.0 && pct <= 100.0)) throw InvalidArgument("cache rate percent must lie in [0, 100]");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, pct, std::chars_format::fixed);
    return parse_percent(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
  }

  constexpr std::int64_t numerator() const noexcept { return num_; }
  constexpr std::int64_t denominator() const noexcept { return den_; }

  double fraction() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  double percent() const noexcept { return 100.0 * fraction(); }

  /// Number of cached files: round-half-up of rate * file_count.
  std::uint64_t cached_count(std::uint64_t file_count) const {
    const auto n = static_cast<unsigned __int128>(num_);
    const auto d = static_cast<unsigned __int128>(den_);
    return static_cast<std::uint64_t>((2 * n * file_count + d) / (2 * d));
  }

  /// Percentage as a short decimal string ("65", "62.5"); exact whenever the
  /// percentage has a finite decimal expansion.
  std::string percent_string() const {
    const auto scaled = static_cast<__int128>(num_) * 100;
    __int128 pow10 = 1;
    for (int digits = 0; digits <= 12; ++digits, pow10 *= 10) {
      if ((scaled * pow10) % den_ != 0) continue;
      const __int128 value = scaled * pow10 / den_;
      std::string whole = std::to_string(static_cast<std::int64_t>(value / pow10));
      if (digits == 0) return whole;
      std::string frac = std::to_string(static_cast<std::int64_t>(value % pow10));
      frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
      return whole + "." + frac;
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, percent());
    return std::string(buf, res.ptr);
  }

  friend bool operator==(const CacheRate& a, const CacheRate& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const CacheRate& a, const CacheRate& b) noexcept {
    const auto lhs = static_cast<__int128>(a.num_) * b.den_;
    const auto rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace hsio
