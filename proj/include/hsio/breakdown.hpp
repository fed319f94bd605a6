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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hsio/error.hpp"
#include "hsio/io_record.hpp"

namespace hsio {

enum class IoClass : std::uint8_t { GfsRead = 0, GfsMeta = 1, LfsRead = 2, LfsMeta = 3 };
enum class OpKind { Read, Meta };

inline constexpr std::array<IoClass, 4> kIoClasses = {IoClass::GfsRead, IoClass::GfsMeta,
                                                      IoClass::LfsRead, IoClass::LfsMeta};

inline constexpr std::string_view to_string(IoClass c) noexcept {
  switch (c) {
    case IoClass::GfsRead: return "GFS-READ";
    case IoClass::GfsMeta: return "GFS-META";
    case IoClass::LfsRead: return "LFS-READ";
    case IoClass::LfsMeta: return "LFS-META";
  }
  return "?";
}

/// Exact, case-sensitive match on the canonical names.
inline std::optional<IoClass> parse_io_class(std::string_view name) noexcept {
  for (IoClass c : kIoClasses) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

constexpr IoClass classify(FsTier fs, OpKind op) noexcept {
  if (fs == FsTier::GFS) return op == OpKind::Read ? IoClass::GfsRead : IoClass::GfsMeta;
  return op == OpKind::Read ? IoClass::LfsRead : IoClass::LfsMeta;
}

/// Seconds one rank spent in each I/O class during one epoch.
struct ClassBreakdown {
  Rank rank = 0;
  std::uint32_t epoch = 0;
  std::array<double, 4> seconds{};

  double& operator[](IoClass c) noexcept { return seconds[static_cast<std::size_t>(c)]; }
  double operator[](IoClass c) const noexcept { return seconds[static_cast<std::size_t>(c)]; }

  double total() const noexcept { return seconds[0] + seconds[1] + seconds[2] + seconds[3]; }

  IoClass dominant() const noexcept {
    IoClass best = IoClass::GfsRead;
    for (IoClass c : kIoClasses) {
      if ((*this)[c] > (*this)[best]) best = c;
    }
    return best;
  }

  void add(const IoRecord& r) noexcept {
    (*this)[classify(r.fs, OpKind::Read)] += r.read_s;
    (*this)[classify(r.fs, OpKind::Meta)] += r.meta_s;
  }

  friend bool operator==(const ClassBreakdown&, const ClassBreakdown&) = default;
};

using RankBreakdowns = std::map<Rank, ClassBreakdown>;

/// Per-rank class totals over the records stamped with `epoch`. Ranks with no
/// records are absent.
inline RankBreakdowns breakdown_epoch(std::span<const IoRecord> records, std::uint32_t epoch) {
  RankBreakdowns out;
  auto hint = out.end();
  for (const IoRecord& r : records) {
    if (r.epoch != epoch) continue;
    if (hint == out.end() || hint->first != r.rank) {
      hint = out.try_emplace(r.rank, ClassBreakdown{r.rank, epoch, {}}).first;
    }
    hint->second.add(r);
  }
  if (out.empty()) throw EmptyResult("no records for epoch " + std::to_string(epoch));
  return out;
}

struct EpochAnalysis {
  std::uint32_t epoch = 0;
  Rank slowest_rank = 0;
  ClassBreakdown breakdown;
  double total_s = 0.0;
};

/// Rank with the largest total; ties go to the lowest rank id.
inline EpochAnalysis slowest(const RankBreakdowns& breakdowns) {
  if (breakdowns.empty()) throw InvalidArgument("slowest() needs at least one rank");
  auto best = breakdowns.begin();
  double best_total = best->second.total();
  for (auto it = std::next(best); it != breakdowns.end(); ++it) {
    const double t = it->second.total();
    if (t > best_total) {
      best = it;
      best_total = t;
    }
  }
  return EpochAnalysis{best->second.epoch, best->first, best->second, best_total};
}

struct SweepCell {
  EpochAnalysis analysis;
  RankBreakdowns ranks;
};

/// Analysed sweep. All per-rank breakdowns are kept because an improvement
/// can move the bottleneck to a different rank.
struct SweepResult {
  std::map<SweepCellKey, SweepCell> cells;

  std::vector<CacheRate> rates_for_epoch(std::uint32_t epoch) const {
    std::vector<CacheRate> out;
    for (const auto& [key, _] : cells) {
      if (key.epoch == epoch) out.push_back(key.rate);
    }
    return out;
  }
};

inline SweepCell analyze_cell(std::span<const IoRecord> records, std::uint32_t epoch) {
  SweepCell cell;
  cell.ranks = breakdown_epoch(records, epoch);
  cell.analysis = slowest(cell.ranks);
  return cell;
}

inline SweepResult sweep_analysis(const std::map<SweepCellKey, std::vector<IoRecord>>& traces) {
  SweepResult out;
  for (const auto& [key, records] : traces) {
    try {
      out.cells.emplace(key, analyze_cell(records, key.epoch));
    } catch (const EmptyResult& e) {
      throw EmptyResult(describe(key) + ": " + e.what());
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(describe(key) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hsio
