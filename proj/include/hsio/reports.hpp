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

#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "hsio/breakdown.hpp"
#include "hsio/error.hpp"
#include "hsio/format.hpp"
#include "hsio/whatif.hpp"

namespace hsio {

inline constexpr std::string_view kSummaryHeader =
    "cache_rate_pct,epoch,slowest_rank,gfs_read_s,gfs_meta_s,lfs_read_s,lfs_meta_s,total_s";
inline constexpr std::string_view kGridHeader =
    "imp_a_pct,imp_b_pct,feasible,min_cache_rate_pct,best_time_s";
inline constexpr std::string_view kEstimateHeader =
    "epoch,improvements,baseline_rate_pct,baseline_slowest_rank,baseline_time_s,"
    "improved_rate_pct,improved_slowest_rank,improved_time_s,reduction_pct";

/// One row per (cache rate, epoch) describing the slowest rank.
inline void write_summary_csv(const SweepResult& sweep, std::ostream& out) {
  out << kSummaryHeader << '\n';
  for (const auto& [key, cell] : sweep.cells) {
    const EpochAnalysis& a = cell.analysis;
    out << key.rate.percent_string() << ',' << key.epoch << ',' << a.slowest_rank;
    for (IoClass c : kIoClasses) out << ',' << format_fixed9(a.breakdown[c]);
    out << ',' << format_fixed9(a.total_s) << '\n';
  }
}

/// One JSON line per (cache rate, epoch, rank). Lossless: times use the
/// shortest round-trip decimal.
inline void write_breakdown_lines(const SweepResult& sweep, std::ostream& out) {
  for (const auto& [key, cell] : sweep.cells) {
    for (const auto& [rank, b] : cell.ranks) {
      out << "{\"cache_rate_pct\":" << key.rate.percent_string() << ",\"epoch\":" << key.epoch
          << ",\"rank\":" << rank << ",\"gfs_read_s\":" << format_shortest(b[IoClass::GfsRead])
          << ",\"gfs_meta_s\":" << format_shortest(b[IoClass::GfsMeta])
          << ",\"lfs_read_s\":" << format_shortest(b[IoClass::LfsRead])
          << ",\"lfs_meta_s\":" << format_shortest(b[IoClass::LfsMeta]) << "}\n";
    }
  }
}

/// Rebuilds a SweepResult (slowest rank recomputed per cell) from breakdown
/// lines.
inline SweepResult read_breakdown_lines(std::istream& in) {
  static constexpr const char* kKeys[] = {"cache_rate_pct", "epoch",      "rank",      "gfs_read_s",
                                          "gfs_meta_s",     "lfs_read_s", "lfs_meta_s"};
  SweepResult out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(std::string("invalid JSON: ") + e.what(), lineno);
    }
    if (!j.is_object() || j.size() != std::size(kKeys)) {
      throw DataError("breakdown line must have exactly the fields cache_rate_pct, epoch, rank, "
                      "gfs_read_s, gfs_meta_s, lfs_read_s, lfs_meta_s",
                      lineno);
    }
    for (const char* k : kKeys) {
      if (!j.contains(k) || !j[k].is_number()) {
        throw DataError(std::string("field '") + k + "' missing or not a number", lineno);
      }
    }
    if (!j["epoch"].is_number_unsigned() || !j["rank"].is_number_unsigned()) {
      throw DataError("epoch and rank must be non-negative integers", lineno);
    }
    SweepCellKey key;
    try {
      key.rate = CacheRate::from_percent(j["cache_rate_pct"].get<double>());
    } catch (const InvalidArgument& e) {
      throw DataError(e.what(), lineno);
    }
    key.epoch = j["epoch"].get<std::uint32_t>();
    ClassBreakdown b;
    b.rank = j["rank"].get<Rank>();
    b.epoch = key.epoch;
    b[IoClass::GfsRead] = j["gfs_read_s"].get<double>();
    b[IoClass::GfsMeta] = j["gfs_meta_s"].get<double>();
    b[IoClass::LfsRead] = j["lfs_read_s"].get<double>();
    b[IoClass::LfsMeta] = j["lfs_meta_s"].get<double>();
    for (double s : b.seconds) {
      if (!(s >= 0.0) || !std::isfinite(s)) throw DataError("class times must be non-negative", lineno);
    }
    auto& ranks = out.cells[key].ranks;
    if (!ranks.emplace(b.rank, b).second) {
      throw DataError("duplicate rank " + std::to_string(b.rank) + " in " + describe(key), lineno);
    }
  }
  if (in.bad()) throw DataError("read failure");
  for (auto& [key, cell] : out.cells) cell.analysis = slowest(cell.ranks);
  return out;
}

inline void write_grid_csv(const FeasibilityGrid& grid, std::ostream& out) {
  out << kGridHeader << '\n';
  for (const auto& c : grid.cells) {
    out << format_shortest(c.imp_a_pct) << ',' << format_shortest(c.imp_b_pct) << ','
        << (c.feasible ? "true" : "false") << ','
        << (c.min_cache_rate ? c.min_cache_rate->percent_string() : std::string()) << ','
        << format_fixed9(c.best_time_s) << '\n';
  }
}

inline std::string describe(const ImprovementSpec& imp) {
  std::string s;
  for (const auto& e : imp.entries) {
    if (!s.empty()) s += ';';
    s += std::string(to_string(e.io_class)) + '=' + format_shortest(e.percent);
  }
  return s;
}

inline void write_estimate_csv(const EstimateComparison& c, std::uint32_t epoch,
                               const ImprovementSpec& imp, std::ostream& out) {
  out << kEstimateHeader << '\n'
      << epoch << ',' << describe(imp) << ',' << c.baseline.cache_rate.percent_string() << ','
      << c.baseline.estimate.slowest_rank << ',' << format_fixed9(c.baseline.estimate.est_total_s)
      << ',' << c.improved.cache_rate.percent_string() << ',' << c.improved.estimate.slowest_rank
      << ',' << format_fixed9(c.improved.estimate.est_total_s) << ','
      << format_fixed9(c.reduction_pct) << '\n';
}

}  // namespace hsio
