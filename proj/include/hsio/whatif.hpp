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

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsio/breakdown.hpp"
#include "hsio/error.hpp"

namespace hsio {

/// "N% throughput improvement" of one I/O class.
struct ClassImprovement {
  IoClass io_class = IoClass::GfsRead;
  double percent = 0.0;
};

/// At most one entry per class; an empty spec is the identity.
struct ImprovementSpec {
  std::vector<ClassImprovement> entries;

  ImprovementSpec() = default;
  ImprovementSpec(std::initializer_list<ClassImprovement> init) : entries(init) {}

  void validate() const {
    std::array<bool, 4> seen{};
    for (const auto& e : entries) {
      if (!(e.percent >= 0.0) || !std::isfinite(e.percent)) {
        throw InvalidArgument("improvement of " + std::string(to_string(e.io_class)) +
                              " must be a non-negative percentage");
      }
      auto& s = seen[static_cast<std::size_t>(e.io_class)];
      if (s) throw InvalidArgument("duplicate improvement for " + std::string(to_string(e.io_class)));
      s = true;
    }
  }
};

/// Time multiplier for an N% throughput improvement: 100 / (100 + N).
inline double improvement_factor(double percent) noexcept { return 100.0 / (100.0 + percent); }

inline ClassBreakdown apply_improvement(const ClassBreakdown& b, const ImprovementSpec& imp) {
  imp.validate();
  ClassBreakdown out = b;
  for (const auto& e : imp.entries) out[e.io_class] = b[e.io_class] * improvement_factor(e.percent);
  return out;
}

struct EstimateResult {
  Rank slowest_rank = 0;
  double est_total_s = 0.0;
  ClassBreakdown est_breakdown;
  ImprovementSpec improvements;
};

/// Improves every rank, then re-picks the slowest (lowest rank on ties). The
/// answer may be a different rank than the unimproved slowest one.
inline EstimateResult estimate_slowest(const RankBreakdowns& all_ranks, const ImprovementSpec& imp) {
  if (all_ranks.empty()) throw InvalidArgument("estimate_slowest() needs at least one rank");
  imp.validate();
  EstimateResult best;
  best.improvements = imp;
  bool first = true;
  for (const auto& [rank, b] : all_ranks) {
    ClassBreakdown improved = apply_improvement(b, imp);
    const double t = improved.total();
    if (first || t > best.est_total_s) {
      best.slowest_rank = rank;
      best.est_total_s = t;
      best.est_breakdown = improved;
      first = false;
    }
  }
  return best;
}

struct RateEstimate {
  CacheRate cache_rate;
  EstimateResult estimate;
};

/// Estimated slowest-process time at every swept rate of `epoch`, ascending.
inline std::vector<RateEstimate> estimate_per_rate(const SweepResult& sweep, std::uint32_t epoch,
                                                   const ImprovementSpec& imp) {
  std::vector<RateEstimate> out;
  for (const auto& [key, cell] : sweep.cells) {
    if (key.epoch != epoch) continue;
    out.push_back(RateEstimate{key.rate, estimate_slowest(cell.ranks, imp)});
  }
  if (out.empty()) throw InvalidArgument("sweep has no cells for epoch " + std::to_string(epoch));
  return out;
}

/// Cache rate minimising the estimated slowest time; ties go to the lower rate.
inline RateEstimate best_cache_rate(const SweepResult& sweep, std::uint32_t epoch,
                                    const ImprovementSpec& imp) {
  auto all = estimate_per_rate(sweep, epoch, imp);
  std::size_t best = 0;
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].estimate.est_total_s < all[best].estimate.est_total_s) best = i;
  }
  return all[best];
}

struct EstimateComparison {
  RateEstimate baseline;
  RateEstimate improved;
  /// 100 * (1 - improved / baseline).
  double reduction_pct = 0.0;
};

inline EstimateComparison compare_best(const SweepResult& sweep, std::uint32_t epoch,
                                       const ImprovementSpec& imp) {
  EstimateComparison c{best_cache_rate(sweep, epoch, {}), best_cache_rate(sweep, epoch, imp), 0.0};
  const double base = c.baseline.estimate.est_total_s;
  c.reduction_pct = base > 0.0 ? 100.0 * (1.0 - c.improved.estimate.est_total_s / base) : 0.0;
  return c;
}

struct FeasibilityCell {
  double imp_a_pct = 0.0;
  double imp_b_pct = 0.0;
  bool feasible = false;
  /// Smallest swept rate whose estimate meets the goal; set iff feasible.
  std::optional<CacheRate> min_cache_rate;
  CacheRate best_cache_rate;
  double best_time_s = 0.0;
};

struct FeasibilityGrid {
  IoClass class_a = IoClass::GfsMeta;
  IoClass class_b = IoClass::LfsRead;
  std::vector<double> rates;  // improvement percentages on each axis
  double goal_s = 0.0;
  std::vector<FeasibilityCell> cells;  // row-major: class_a outer, class_b inner

  const FeasibilityCell& at(std::size_t ia, std::size_t ib) const { return cells.at(ia * rates.size() + ib); }
};

/// Improvement percentages 0, step, 2*step, ... up to max_percent.
inline std::vector<double> improvement_axis(double max_percent, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("step must be positive");
  if (!(max_percent >= 0.0) || !std::isfinite(max_percent)) {
    throw InvalidArgument("max improvement must be non-negative");
  }
  const auto n = static_cast<std::size_t>(std::floor(max_percent / step + 1e-9));
  std::vector<double> axis(n + 1);
  for (std::size_t i = 0; i <= n; ++i) axis[i] = static_cast<double>(i) * step;
  return axis;
}

/// Evaluates every (Na, Nb) pair against the goal. A cell is feasible when its
/// best estimated slowest time over the swept cache rates is within goal_s.
inline FeasibilityGrid explore_grid(const SweepResult& sweep, std::uint32_t epoch, IoClass class_a,
                                    IoClass class_b, double max_percent, double step, double goal_s) {
  if (class_a == class_b) throw InvalidArgument("the two improved classes must differ");
  if (std::isnan(goal_s)) throw InvalidArgument("goal must be a number");
  FeasibilityGrid grid;
  grid.class_a = class_a;
  grid.class_b = class_b;
  grid.rates = improvement_axis(max_percent, step);
  grid.goal_s = goal_s;
  grid.cells.reserve(grid.rates.size() * grid.rates.size());
  for (double na : grid.rates) {
    for (double nb : grid.rates) {
      const ImprovementSpec imp{{class_a, na}, {class_b, nb}};
      const auto per_rate = estimate_per_rate(sweep, epoch, imp);
      FeasibilityCell cell;
      cell.imp_a_pct = na;
      cell.imp_b_pct = nb;
      std::size_t best = 0;
      for (std::size_t i = 0; i < per_rate.size(); ++i) {
        const double t = per_rate[i].estimate.est_total_s;
        if (t < per_rate[best].estimate.est_total_s) best = i;
        if (!cell.min_cache_rate && t <= goal_s) cell.min_cache_rate = per_rate[i].cache_rate;
      }
      cell.best_cache_rate = per_rate[best].cache_rate;
      cell.best_time_s = per_rate[best].estimate.est_total_s;
      cell.feasible = cell.min_cache_rate.has_value();
      grid.cells.push_back(cell);
    }
  }
  return grid;
}

}  // namespace hsio
