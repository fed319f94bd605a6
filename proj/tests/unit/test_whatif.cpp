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

#include <gtest/gtest.h>

#include <sstream>

#include "hsio/reports.hpp"
#include "hsio/whatif.hpp"

namespace hsio {
namespace {

ClassBreakdown make(Rank rank, double gr, double gm, double lr, double lm) {
  return ClassBreakdown{rank, 2, {gr, gm, lr, lm}};
}

RankBreakdowns ranks(std::initializer_list<ClassBreakdown> items) {
  RankBreakdowns out;
  for (const auto& b : items) out.emplace(b.rank, b);
  return out;
}

// Exhaustive recomputation used as the oracle for estimate_slowest.
std::pair<Rank, double> brute_force_slowest(const RankBreakdowns& all, const ImprovementSpec& imp) {
  Rank best_rank = 0;
  double best = -1.0;
  for (const auto& [rank, b] : all) {
    double t = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      double factor = 1.0;
      for (const auto& e : imp.entries) {
        if (static_cast<std::size_t>(e.io_class) == c) factor = 100.0 / (100.0 + e.percent);
      }
      t += b.seconds[c] * factor;
    }
    if (t > best) {
      best = t;
      best_rank = rank;
    }
  }
  return {best_rank, best};
}

TEST(ApplyImprovement, DocumentedValues) {
  const auto b = make(0, 0, 3.0, 4.4, 0);
  EXPECT_DOUBLE_EQ(apply_improvement(b, {{IoClass::GfsMeta, 50}})[IoClass::GfsMeta], 2.0);
  EXPECT_DOUBLE_EQ(apply_improvement(b, {{IoClass::LfsRead, 120}})[IoClass::LfsRead], 2.0);
  EXPECT_EQ(apply_improvement(b, {{IoClass::GfsMeta, 0}}), b);
  EXPECT_EQ(apply_improvement(b, {}), b);
  EXPECT_EQ(apply_improvement(b, {{IoClass::LfsRead, 100}})[IoClass::LfsRead], 2.2);
  EXPECT_EQ(apply_improvement(b, {{IoClass::GfsMeta, 50}})[IoClass::LfsRead], 4.4);
}

TEST(ApplyImprovement, Errors) {
  const auto b = make(0, 1, 1, 1, 1);
  EXPECT_THROW(apply_improvement(b, {{IoClass::GfsMeta, 10}, {IoClass::GfsMeta, 20}}), InvalidArgument);
  EXPECT_THROW(apply_improvement(b, {{IoClass::GfsMeta, -1}}), InvalidArgument);
}

TEST(EstimateSlowest, BottleneckMigrates) {
  const auto all = ranks({make(0, 0, 4.0, 1.0, 0), make(1, 0, 1.0, 3.5, 0)});
  EXPECT_EQ(slowest(all).slowest_rank, 0u);
  const auto est = estimate_slowest(all, {{IoClass::GfsMeta, 100}});
  EXPECT_EQ(est.slowest_rank, 1u);
  EXPECT_EQ(est.est_total_s, 4.0);
  EXPECT_EQ(brute_force_slowest(all, {{IoClass::GfsMeta, 100}}), std::make_pair(Rank{1}, 4.0));
}

TEST(EstimateSlowest, IdentityAndSingleRank) {
  const auto all = ranks({make(0, 1, 2, 3, 4), make(1, 4, 3, 2, 1.5), make(2, 0, 0, 0, 0)});
  const auto est = estimate_slowest(all, {});
  const auto base = slowest(all);
  EXPECT_EQ(est.slowest_rank, base.slowest_rank);
  EXPECT_EQ(est.est_total_s, base.total_s);
  const auto one = estimate_slowest(ranks({make(5, 2, 2, 0, 0)}), {{IoClass::GfsRead, 100}});
  EXPECT_EQ(one.slowest_rank, 5u);
  EXPECT_EQ(one.est_total_s, 3.0);
  EXPECT_THROW(estimate_slowest(RankBreakdowns{}, {}), InvalidArgument);
}

TEST(EstimateSlowest, MatchesBruteForceOnRandomInstances) {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    RankBreakdowns all;
    const auto n = 1 + rng.bounded(5);
    for (Rank r = 0; r < n; ++r) {
      all.emplace(r, make(r, rng.uniform() * 5, rng.uniform() * 5, rng.uniform() * 5, rng.uniform()));
    }
    ImprovementSpec imp;
    for (IoClass c : kIoClasses) {
      if (rng.bounded(2)) imp.entries.push_back({c, static_cast<double>(rng.bounded(300))});
    }
    const auto est = estimate_slowest(all, imp);
    const auto [rank, total] = brute_force_slowest(all, imp);
    ASSERT_EQ(est.slowest_rank, rank);
    ASSERT_EQ(est.est_total_s, total);
  }
}

SweepResult sweep_from(std::initializer_list<std::pair<int, RankBreakdowns>> cells, std::uint32_t epoch = 2) {
  SweepResult s;
  for (const auto& [pct, rb] : cells) {
    SweepCell cell;
    cell.ranks = rb;
    cell.analysis = slowest(rb);
    s.cells.emplace(SweepCellKey{CacheRate::from_fraction(pct, 100), epoch}, cell);
  }
  return s;
}

TEST(BestCacheRate, Argmin) {
  const auto s = sweep_from({{0, ranks({make(0, 10, 0, 0, 0)})},
                             {50, ranks({make(0, 3, 0, 3, 0)})},
                             {100, ranks({make(0, 0, 0, 8, 0)})}});
  const auto best = best_cache_rate(s, 2, {});
  EXPECT_EQ(best.cache_rate, CacheRate::from_fraction(1, 2));
  EXPECT_EQ(best.estimate.est_total_s, 6.0);
  EXPECT_THROW(best_cache_rate(s, 1, {}), InvalidArgument);
}

TEST(BestCacheRate, TiesPickLowerRate) {
  const auto s = sweep_from({{20, ranks({make(0, 5, 0, 0, 0)})}, {40, ranks({make(0, 0, 0, 5, 0)})}});
  EXPECT_EQ(best_cache_rate(s, 2, {}).cache_rate, CacheRate::from_fraction(1, 5));
}

TEST(BestCacheRate, ImprovementMovesArgminUp) {
  const auto s = sweep_from({{0, ranks({make(0, 0, 10, 0, 0), make(1, 0, 9, 0, 0)})},
                             {50, ranks({make(0, 0, 5, 3, 0), make(1, 0, 4, 3.5, 0)})},
                             {100, ranks({make(0, 0, 0, 9, 0), make(1, 0, 0, 8.5, 0)})}});
  const ImprovementSpec imp{{IoClass::LfsRead, 100}};
  // Oracle: exhaustive evaluation of every cell.
  CacheRate oracle_rate;
  double oracle_best = INFINITY;
  for (const auto& [key, cell] : s.cells) {
    const double t = brute_force_slowest(cell.ranks, imp).second;
    if (t < oracle_best) {
      oracle_best = t;
      oracle_rate = key.rate;
    }
  }
  EXPECT_EQ(best_cache_rate(s, 2, {}).cache_rate, CacheRate::from_fraction(1, 2));
  const auto best = best_cache_rate(s, 2, imp);
  EXPECT_EQ(best.cache_rate, oracle_rate);
  EXPECT_EQ(best.cache_rate, CacheRate::from_fraction(1, 1));
  EXPECT_EQ(best.estimate.est_total_s, oracle_best);
  EXPECT_EQ(oracle_best, 4.5);
}

SweepResult synthetic_sweep() {
  return sweep_from({{0, ranks({make(0, 1, 8, 0, 0), make(1, 1.5, 7, 0, 0)})},
                     {25, ranks({make(0, 0.75, 6, 1.5, 0.1), make(1, 0.5, 5, 2.5, 0.1)})},
                     {50, ranks({make(0, 0.5, 4, 3, 0.2), make(1, 0.5, 3.5, 3.75, 0.2)})},
                     {75, ranks({make(0, 0.25, 2, 4.5, 0.3), make(1, 0.25, 1.5, 5, 0.3)})},
                     {100, ranks({make(0, 0, 0, 6, 0.4), make(1, 0, 0, 6.5, 0.4)})}});
}

TEST(ExploreGrid, CardinalityAndOrder) {
  const auto g = explore_grid(synthetic_sweep(), 2, IoClass::GfsMeta, IoClass::LfsRead, 200, 10, 4.0);
  EXPECT_EQ(g.rates.size(), 21u);
  EXPECT_EQ(g.cells.size(), 441u);
  EXPECT_EQ(g.cells[1].imp_a_pct, 0.0);
  EXPECT_EQ(g.cells[1].imp_b_pct, 10.0);
  EXPECT_EQ(g.cells[21].imp_a_pct, 10.0);
}

TEST(ExploreGrid, UpwardClosedAndIdentityCell) {
  const auto s = synthetic_sweep();
  const double base = best_cache_rate(s, 2, {}).estimate.est_total_s;
  const auto g = explore_grid(s, 2, IoClass::GfsMeta, IoClass::LfsRead, 200, 10, 4.0);
  EXPECT_EQ(g.at(0, 0).feasible, base <= 4.0);
  EXPECT_FALSE(g.at(0, 0).feasible);
  for (std::size_t a = 0; a < g.rates.size(); ++a) {
    for (std::size_t b = 0; b < g.rates.size(); ++b) {
      const auto& c = g.at(a, b);
      EXPECT_EQ(c.feasible, c.min_cache_rate.has_value());
      if (!c.feasible) continue;
      if (a + 1 < g.rates.size()) {
        EXPECT_TRUE(g.at(a + 1, b).feasible);
      }
      if (b + 1 < g.rates.size()) {
        EXPECT_TRUE(g.at(a, b + 1).feasible);
      }
    }
  }
  EXPECT_TRUE(g.at(20, 20).feasible);
}

TEST(ExploreGrid, DegenerateGoals) {
  const auto s = synthetic_sweep();
  const auto all = explore_grid(s, 2, IoClass::GfsMeta, IoClass::LfsRead, 50, 25, INFINITY);
  for (const auto& c : all.cells) {
    EXPECT_TRUE(c.feasible);
    EXPECT_EQ(*c.min_cache_rate, CacheRate::from_fraction(0, 1));
  }
  const auto none = explore_grid(s, 2, IoClass::GfsMeta, IoClass::LfsRead, 50, 25, 0.1);
  for (const auto& c : none.cells) EXPECT_FALSE(c.feasible);
}

TEST(ExploreGrid, MinRateCanDifferFromArgmin) {
  const auto s = synthetic_sweep();
  // Baseline slowest totals: 0%: 9.0, 25%: 8.35, 50%: 7.95, 75%: 7.05, 100%: 6.9.
  const auto g = explore_grid(s, 2, IoClass::GfsMeta, IoClass::LfsRead, 0, 10, 7.1);
  ASSERT_EQ(g.cells.size(), 1u);
  EXPECT_EQ(*g.cells[0].min_cache_rate, CacheRate::from_fraction(3, 4));
  EXPECT_EQ(g.cells[0].best_cache_rate, CacheRate::from_fraction(1, 1));
}

TEST(ExploreGrid, MatchesExhaustiveOracleCsv) {
  const auto s = synthetic_sweep();
  const double goal = 5.0;
  std::ostringstream got;
  write_grid_csv(explore_grid(s, 2, IoClass::GfsMeta, IoClass::LfsRead, 150, 25, goal), got);

  std::ostringstream want;
  want << "imp_a_pct,imp_b_pct,feasible,min_cache_rate_pct,best_time_s\n";
  for (int a = 0; a <= 150; a += 25) {
    for (int b = 0; b <= 150; b += 25) {
      const ImprovementSpec imp{{IoClass::GfsMeta, static_cast<double>(a)}, {IoClass::LfsRead, static_cast<double>(b)}};
      double best = INFINITY;
      std::string min_rate;
      for (const auto& [key, cell] : s.cells) {
        const double t = brute_force_slowest(cell.ranks, imp).second;
        best = std::min(best, t);
        if (min_rate.empty() && t <= goal) min_rate = key.rate.percent_string();
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.9f", best);
      want << a << ',' << b << ',' << (min_rate.empty() ? "false" : "true") << ',' << min_rate << ','
           << buf << '\n';
    }
  }
  EXPECT_EQ(got.str(), want.str());
}

TEST(ExploreGrid, Errors) {
  const auto s = synthetic_sweep();
  EXPECT_THROW(explore_grid(s, 2, IoClass::GfsMeta, IoClass::GfsMeta, 100, 10, 1), InvalidArgument);
  EXPECT_THROW(explore_grid(s, 2, IoClass::GfsMeta, IoClass::LfsRead, 100, 0, 1), InvalidArgument);
  EXPECT_THROW(explore_grid(s, 2, IoClass::GfsMeta, IoClass::LfsRead, -1, 10, 1), InvalidArgument);
}

}  // namespace
}  // namespace hsio
