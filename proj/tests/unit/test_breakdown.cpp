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

#include <set>

#include "hsio/breakdown.hpp"
#include "hsio/storage_sim.hpp"

namespace hsio {
namespace {

IoRecord rec(Rank rank, std::uint32_t epoch, FsTier fs, double read, double meta) {
  return IoRecord{rank, epoch, FileId(0), fs, 0, read, meta};
}

TEST(Classify, TotalAndInjective) {
  EXPECT_EQ(classify(FsTier::GFS, OpKind::Read), IoClass::GfsRead);
  EXPECT_EQ(classify(FsTier::GFS, OpKind::Meta), IoClass::GfsMeta);
  EXPECT_EQ(classify(FsTier::LFS, OpKind::Read), IoClass::LfsRead);
  EXPECT_EQ(classify(FsTier::LFS, OpKind::Meta), IoClass::LfsMeta);
  std::set<IoClass> image;
  for (auto fs : {FsTier::GFS, FsTier::LFS}) {
    for (auto op : {OpKind::Read, OpKind::Meta}) image.insert(classify(fs, op));
  }
  EXPECT_EQ(image.size(), 4u);
}

TEST(Classify, NamesRoundTrip) {
  for (IoClass c : kIoClasses) EXPECT_EQ(parse_io_class(to_string(c)), c);
  EXPECT_EQ(parse_io_class("gfs_meta"), std::nullopt);
  EXPECT_EQ(parse_io_class("gfs-meta"), std::nullopt);
}

TEST(BreakdownEpoch, SumsPerClass) {
  const std::vector<IoRecord> recs{rec(0, 0, FsTier::GFS, 0.1, 0.01), rec(0, 0, FsTier::GFS, 0.2, 0.01)};
  const auto b = breakdown_epoch(recs, 0);
  ASSERT_EQ(b.size(), 1u);
  const auto& r0 = b.at(0);
  EXPECT_DOUBLE_EQ(r0[IoClass::GfsRead], 0.3);
  EXPECT_DOUBLE_EQ(r0[IoClass::GfsMeta], 0.02);
  EXPECT_EQ(r0[IoClass::LfsRead], 0.0);
  EXPECT_EQ(r0[IoClass::LfsMeta], 0.0);
}

TEST(BreakdownEpoch, FiltersEpochAndSkipsAbsentRanks) {
  const std::vector<IoRecord> recs{rec(0, 0, FsTier::GFS, 1, 1), rec(1, 1, FsTier::LFS, 2, 0.5),
                                   rec(3, 1, FsTier::GFS, 4, 0), rec(1, 1, FsTier::GFS, 0.25, 0)};
  const auto b = breakdown_epoch(recs, 1);
  EXPECT_EQ(b.size(), 2u);
  EXPECT_FALSE(b.contains(0));
  EXPECT_FALSE(b.contains(2));
  EXPECT_EQ(b.at(1)[IoClass::LfsRead], 2.0);
  EXPECT_EQ(b.at(1)[IoClass::LfsMeta], 0.5);
  EXPECT_EQ(b.at(1)[IoClass::GfsRead], 0.25);
  EXPECT_THROW(breakdown_epoch(recs, 7), EmptyResult);
}

TEST(BreakdownEpoch, DecompositionIsComplete) {
  // Dyadic times so every summation order is exact.
  SplitMix64 rng(5);
  std::vector<IoRecord> recs;
  double expected = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double read = static_cast<double>(rng.bounded(4096)) / 1024.0;
    const double meta = static_cast<double>(rng.bounded(256)) / 4096.0;
    recs.push_back(rec(static_cast<Rank>(rng.bounded(17)), 0, rng.bounded(2) ? FsTier::GFS : FsTier::LFS,
                       read, meta));
    expected += read + meta;
  }
  double got = 0.0;
  for (const auto& [rank, b] : breakdown_epoch(recs, 0)) got += b.total();
  EXPECT_EQ(got, expected);
}

RankBreakdowns totals(std::initializer_list<std::pair<Rank, double>> items) {
  RankBreakdowns out;
  for (auto [rank, t] : items) {
    ClassBreakdown b{rank, 0, {}};
    b[IoClass::GfsRead] = t;
    out.emplace(rank, b);
  }
  return out;
}

TEST(Slowest, ArgmaxWithLowestRankTieBreak) {
  const auto a = slowest(totals({{0, 2.0}, {1, 5.0}, {2, 3.0}}));
  EXPECT_EQ(a.slowest_rank, 1u);
  EXPECT_EQ(a.total_s, 5.0);
  EXPECT_EQ(slowest(totals({{0, 1.0}, {1, 1.0}, {2, 1.0}})).slowest_rank, 0u);
  EXPECT_EQ(slowest(totals({{4, 1.5}, {9, 1.5}})).slowest_rank, 4u);
  EXPECT_EQ(slowest(totals({{7, 0.5}})).slowest_rank, 7u);
  EXPECT_THROW(slowest(RankBreakdowns{}), InvalidArgument);
}

TEST(SweepAnalysis, CardinalityAndFullCache) {
  const SimConfig cfg{DatasetSpec{512, 131072, 1}, ClusterSpec{4, 2, 2, 4},
                      StorageProfile{1e9, 3e8, 2e-4, 750, 5e-4}, SimOptions{3, 0.1, 2}};
  const std::vector<CacheRate> rates{CacheRate::parse_percent("0"), CacheRate::parse_percent("40"),
                                     CacheRate::parse_percent("100")};
  std::map<SweepCellKey, std::vector<IoRecord>> traces;
  for (auto& [key, trace] : simulate_sweep(cfg, rates)) traces.emplace(key, trace.records);
  const auto sweep = sweep_analysis(traces);
  EXPECT_EQ(sweep.cells.size(), 6u);
  for (const auto& [key, cell] : sweep.cells) {
    EXPECT_EQ(cell.ranks.size(), 8u);
    for (const auto& [rank, b] : cell.ranks) EXPECT_LE(b.total(), cell.analysis.total_s);
    if (key.rate == CacheRate::from_fraction(1, 1)) {
      EXPECT_EQ(cell.analysis.breakdown[IoClass::GfsRead], 0.0);
      EXPECT_EQ(cell.analysis.breakdown[IoClass::GfsMeta], 0.0);
    }
  }
}

TEST(SweepAnalysis, ReproducesSimulatorTotals) {
  const SimConfig cfg{DatasetSpec{1000, 131072, 1}, ClusterSpec{5, 2, 1, 3},
                      StorageProfile{1e9, 3e8, 2e-4, 750, 5e-4}, SimOptions{8, 0.3, 2}};
  for (auto& [key, trace] : simulate_sweep(cfg, {CacheRate::parse_percent("25"), CacheRate::parse_percent("75")})) {
    const auto ranks = breakdown_epoch(trace.records, key.epoch);
    for (const auto& [rank, b] : ranks) {
      EXPECT_NEAR(b.total(), trace.rank_totals[rank], 1e-9 * trace.rank_totals[rank]);
    }
  }
}

TEST(SweepAnalysis, ReportsCellOnError) {
  std::map<SweepCellKey, std::vector<IoRecord>> traces;
  traces[SweepCellKey{CacheRate::parse_percent("30"), 1}] = {rec(0, 0, FsTier::GFS, 1, 1)};
  try {
    sweep_analysis(traces);
    FAIL();
  } catch (const EmptyResult& e) {
    EXPECT_NE(std::string(e.what()).find("cache rate 30%, epoch 1"), std::string::npos);
  }
}

}  // namespace
}  // namespace hsio
