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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "hsio/error.hpp"
#include "hsio/io_record.hpp"
#include "hsio/random.hpp"
#include "hsio/workload.hpp"

namespace hsio {

/// Performance knobs of the two storage tiers.
struct StorageProfile {
  double ost_read_bw = 1.0;        // bytes/s per OST
  double ssd_read_bw = 1.0;        // bytes/s per SSD
  double gfs_meta_base_s = 1.0;    // uncontended open+close on the GFS
  double gfs_meta_capacity = 1.0;  // metadata server capacity, ops/s
  double lfs_meta_s = 1.0;         // open+close on the LFS

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string("storage.") + name + " must be a positive finite number");
      }
    };
    positive(ost_read_bw, "ost_read_bw");
    positive(ssd_read_bw, "ssd_read_bw");
    positive(gfs_meta_base_s, "gfs_meta_base_s");
    positive(gfs_meta_capacity, "gfs_meta_capacity");
    positive(lfs_meta_s, "lfs_meta_s");
  }

  friend bool operator==(const StorageProfile&, const StorageProfile&) = default;
};

struct SimOptions {
  std::uint64_t seed = 0;
  double jitter_sigma = 0.0;  // log-normal sigma of the per-rank time factor
  std::uint32_t epochs = 1;

  void validate() const {
    if (!(jitter_sigma >= 0.0) || !std::isfinite(jitter_sigma)) {
      throw InvalidArgument("sim.jitter_sigma must be a non-negative finite number");
    }
    if (epochs < 1) throw InvalidArgument("sim.epochs must be >= 1");
  }

  friend bool operator==(const SimOptions&, const SimOptions&) = default;
};

struct MetaSolution {
  double meta_time_s = 0.0;
  double load_factor = 1.0;
  int iterations = 0;
};

/// Residual of the metadata congestion fixed point,
///   f(m) = m - L0 * max(1, P / (C * (m + r))).
/// A process cycles through open+close (m) and read (r), so P active
/// processes offer P / (m + r) metadata ops/s against capacity C.
inline double meta_residual(const StorageProfile& profile, double active_gfs_procs,
                            double per_file_gfs_read_s, double meta_time_s) noexcept {
  const double load = active_gfs_procs /
                      (profile.gfs_meta_capacity * (meta_time_s + per_file_gfs_read_s));
  return meta_time_s - profile.gfs_meta_base_s * std::max(1.0, load);
}

/// Solves for the congested GFS open+close latency by bisection.
///
/// f is strictly increasing in m, and the bracket
///   [L0, L0 * max(1, P / (C * (L0 + r)))]
/// satisfies f(lo) <= 0 <= f(hi), so the root is unique. Iterates until the
/// bracket collapses to 1e-12 s (well inside the 1e-9 s contract).
inline MetaSolution solve_meta_latency(const StorageProfile& profile, double active_gfs_procs,
                                       double per_file_gfs_read_s) {
  profile.validate();
  if (!(active_gfs_procs >= 0.0) || !std::isfinite(active_gfs_procs)) {
    throw InvalidArgument("active GFS process count must be non-negative");
  }
  if (!(per_file_gfs_read_s > 0.0) || !std::isfinite(per_file_gfs_read_s)) {
    throw InvalidArgument("per-file GFS read time must be positive");
  }

  const double base = profile.gfs_meta_base_s;
  const double capacity = profile.gfs_meta_capacity;
  const double r = per_file_gfs_read_s;
  const double P = active_gfs_procs;
  auto f = [&](double m) { return meta_residual(profile, P, r, m); };
  auto load_at = [&](double m) { return std::max(1.0, P / (capacity * (m + r))); };

  double lo = base;
  double hi = base * load_at(base);
  if (hi <= lo) return MetaSolution{base, 1.0, 0};
  if (f(lo) > 0.0 || f(hi) < 0.0) {
    throw InternalError("metadata fixed point is not bracketed");
  }

  constexpr int kMaxIterations = 200;
  constexpr double kTolerance = 1e-12;
  int it = 0;
  while (it < kMaxIterations && hi - lo > kTolerance) {
    ++it;
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0) hi = mid;
    else lo = mid;
  }
  const double m = lo + 0.5 * (hi - lo);
  return MetaSolution{m, load_at(m), it};
}

/// Derived per-file costs for one (dataset, cluster, cache) configuration.
struct EpochModel {
  double gfs_bw_per_proc = 0.0;
  double lfs_bw_per_proc = 0.0;
  double gfs_read_s = 0.0;  // per file
  double lfs_read_s = 0.0;  // per file
  double active_gfs_procs = 0.0;
  MetaSolution gfs_meta;
  double lfs_meta_s = 0.0;
};

inline EpochModel build_epoch_model(const DatasetSpec& dataset, const ClusterSpec& cluster,
                                    const CacheAssignment& cache, const StorageProfile& profile) {
  EpochModel m;
  const double procs = cluster.total_procs();
  const double size = static_cast<double>(dataset.file_size_bytes);
  m.gfs_bw_per_proc = static_cast<double>(cluster.gfs_ost_count) * profile.ost_read_bw / procs;
  m.lfs_bw_per_proc = profile.ssd_read_bw / static_cast<double>(cluster.procs_per_ssd());
  m.gfs_read_s = size / m.gfs_bw_per_proc;
  m.lfs_read_s = size / m.lfs_bw_per_proc;
  const auto gfs_files = static_cast<double>(dataset.file_count - cache.k);
  m.active_gfs_procs = procs * gfs_files / static_cast<double>(dataset.file_count);
  m.gfs_meta = solve_meta_latency(profile, m.active_gfs_procs, m.gfs_read_s);
  m.lfs_meta_s = profile.lfs_meta_s;
  return m;
}

namespace detail {
inline constexpr std::uint64_t kJitterStreamTag = 0x6a6974746572212aULL;  // "jitter!*"
}

/// Multiplicative slowdown of one rank in one epoch; exactly 1 when sigma is 0.
inline double rank_jitter(std::uint64_t seed, std::uint32_t epoch, Rank rank, double sigma) {
  if (sigma == 0.0) return 1.0;
  auto rng = SplitMix64::keyed({detail::kJitterStreamTag, seed, epoch, rank});
  return std::exp(sigma * rng.normal());
}

struct EpochTrace {
  std::vector<IoRecord> records;
  std::vector<double> rank_totals;  // indexed by rank
  EpochModel model;
};

/// Computes every rank's per-file read and metadata times for one epoch.
/// Records are emitted rank by rank in shuffle order.
inline EpochTrace simulate_epoch(const DatasetSpec& dataset, const ClusterSpec& cluster,
                                 const CacheAssignment& cache, const ShufflePlan& plan,
                                 const StorageProfile& profile, const SimOptions& opts) {
  dataset.validate();
  cluster.validate();
  profile.validate();
  opts.validate();
  if (plan.n_procs() != cluster.total_procs()) {
    throw InvalidArgument("shuffle plan has " + std::to_string(plan.n_procs()) +
                          " ranks but the cluster has " + std::to_string(cluster.total_procs()));
  }
  if (cache.file_count != dataset.file_count || cache.k > dataset.file_count) {
    throw InvalidArgument("cache assignment does not match the dataset");
  }
  {
    std::vector<bool> seen(dataset.file_count, false);
    std::uint64_t count = 0;
    for (const auto& files : plan.assignment) {
      for (FileIndex id : files) {
        if (id >= dataset.file_count || seen[id]) {
          throw InvalidArgument("shuffle plan does not partition the dataset");
        }
        seen[id] = true;
        ++count;
      }
    }
    if (count != dataset.file_count) throw InvalidArgument("shuffle plan does not cover the dataset");
  }

  EpochTrace trace;
  trace.model = build_epoch_model(dataset, cluster, cache, profile);
  const EpochModel& m = trace.model;
  const double gfs_meta = m.gfs_meta.meta_time_s;

  trace.records.reserve(dataset.file_count);
  trace.rank_totals.resize(plan.n_procs());
  for (Rank rank = 0; rank < plan.n_procs(); ++rank) {
    const double factor = rank_jitter(opts.seed, plan.epoch, rank, opts.jitter_sigma);
    std::uint64_t n_lfs = 0;
    for (FileIndex id : plan.assignment[rank]) {
      const bool cached = cache.contains(id);
      n_lfs += cached ? 1 : 0;
      IoRecord rec;
      rec.rank = rank;
      rec.epoch = plan.epoch;
      rec.file_id = FileId(id);
      rec.fs = cached ? FsTier::LFS : FsTier::GFS;
      rec.bytes = dataset.file_size_bytes;
      rec.read_s = factor * (cached ? m.lfs_read_s : m.gfs_read_s);
      rec.meta_s = factor * (cached ? m.lfs_meta_s : gfs_meta);
      trace.records.push_back(std::move(rec));
    }
    const auto n_gfs = plan.assignment[rank].size() - n_lfs;
    trace.rank_totals[rank] =
        factor * (static_cast<double>(n_gfs) * (gfs_meta + m.gfs_read_s) +
                  static_cast<double>(n_lfs) * (m.lfs_meta_s + m.lfs_read_s));
  }
  return trace;
}

/// Everything the simulator needs besides the sweep points.
struct SimConfig {
  DatasetSpec dataset;
  ClusterSpec cluster;
  StorageProfile profile;
  SimOptions options;

  void validate() const {
    dataset.validate();
    cluster.validate();
    profile.validate();
    options.validate();
    if (dataset.file_count < cluster.total_procs()) {
      throw InvalidArgument("dataset.file_count is smaller than the number of processes");
    }
  }
};

inline void validate_sweep_rates(const std::vector<CacheRate>& rates) {
  if (rates.empty()) throw InvalidArgument("cache rate sweep is empty");
  for (std::size_t i = 1; i < rates.size(); ++i) {
    if (!(rates[i - 1] < rates[i])) {
      throw InvalidArgument("cache rates must be strictly increasing (" +
                            rates[i - 1].percent_string() + "% followed by " +
                            rates[i].percent_string() + "%)");
    }
  }
}

/// Streams every (rate, epoch) cell to `visit` without keeping traces alive,
/// in rate-major order. Each epoch's shuffle plan is shared across rates.
inline void for_each_sweep_cell(
    const SimConfig& config, const std::vector<CacheRate>& rates,
    const std::function<void(const SweepCellKey&, const EpochTrace&)>& visit) {
  config.validate();
  validate_sweep_rates(rates);
  std::vector<ShufflePlan> plans;
  plans.reserve(config.options.epochs);
  for (std::uint32_t e = 0; e < config.options.epochs; ++e) {
    plans.push_back(build_shuffle_plan(config.dataset, config.cluster.total_procs(), e,
                                       config.options.seed));
  }
  for (const CacheRate& rate : rates) {
    const CacheAssignment cache = assign_cache(config.dataset, CacheConfig{rate});
    for (const ShufflePlan& plan : plans) {
      const EpochTrace trace =
          simulate_epoch(config.dataset, config.cluster, cache, plan, config.profile, config.options);
      visit(SweepCellKey{rate, plan.epoch}, trace);
    }
  }
}

inline std::map<SweepCellKey, EpochTrace> simulate_sweep(const SimConfig& config,
                                                         const std::vector<CacheRate>& rates) {
  std::map<SweepCellKey, EpochTrace> out;
  for_each_sweep_cell(config, rates, [&](const SweepCellKey& key, const EpochTrace& trace) {
    out.emplace(key, trace);
  });
  return out;
}

}  // namespace hsio
