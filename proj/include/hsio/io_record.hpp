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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "hsio/workload.hpp"

namespace hsio {

enum class FsTier { GFS, LFS };

inline std::string_view to_string(FsTier fs) noexcept { return fs == FsTier::GFS ? "GFS" : "LFS"; }

inline std::optional<FsTier> parse_fs_tier(std::string_view s) noexcept {
  if (s == "GFS") return FsTier::GFS;
  if (s == "LFS") return FsTier::LFS;
  return std::nullopt;
}

/// Opaque file identity: a simulator file index or darshan record id (both
/// integers), or a free-form string when the source uses one.
class FileId {
 public:
  FileId() = default;
  FileId(std::uint64_t id) : value_(id) {}  // NOLINT(google-explicit-constructor)
  explicit FileId(std::string id) : value_(std::move(id)) {}

  bool is_integer() const noexcept { return std::holds_alternative<std::uint64_t>(value_); }
  std::uint64_t integer() const { return std::get<std::uint64_t>(value_); }
  const std::string& text() const { return std::get<std::string>(value_); }

  friend bool operator==(const FileId&, const FileId&) = default;

 private:
  std::variant<std::uint64_t, std::string> value_{std::uint64_t{0}};
};

/// One rank's profile of one file within one epoch. read_s holds the
/// POSIX_F_READ_TIME counter and meta_s holds POSIX_F_META_TIME.
struct IoRecord {
  Rank rank = 0;
  std::uint32_t epoch = 0;
  FileId file_id;
  FsTier fs = FsTier::GFS;
  std::uint64_t bytes = 0;
  double read_s = 0.0;
  double meta_s = 0.0;

  double total_s() const noexcept { return read_s + meta_s; }

  friend bool operator==(const IoRecord&, const IoRecord&) = default;
};

}  // namespace hsio

namespace hsio {

/// Identifies one measured (or simulated) cell of a cache-rate sweep.
struct SweepCellKey {
  CacheRate rate;
  std::uint32_t epoch = 0;

  friend bool operator==(const SweepCellKey&, const SweepCellKey&) = default;
  friend std::strong_ordering operator<=>(const SweepCellKey& a, const SweepCellKey& b) noexcept {
    if (auto c = a.rate <=> b.rate; c != 0) return c;
    return a.epoch <=> b.epoch;
  }
};

inline std::string describe(const SweepCellKey& key) {
  return "cache rate " + key.rate.percent_string() + "%, epoch " + std::to_string(key.epoch);
}

}  // namespace hsio
