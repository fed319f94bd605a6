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
#include <ranges>
#include <span>
#include <string>
#include <vector>

#include "hsio/cache_rate.hpp"
#include "hsio/error.hpp"
#include "hsio/random.hpp"

namespace hsio {

using Rank = std::uint32_t;
using FileIndex = std::uint64_t;

/// Geometry of the training dataset. One sample per file unless stated.
struct DatasetSpec {
  std::uint64_t file_count = 1;
  std::uint64_t file_size_bytes = 1;
  std::uint64_t samples_per_file = 1;

  std::uint64_t total_bytes() const noexcept { return file_count * file_size_bytes; }

  void validate() const {
    if (file_count < 1) throw InvalidArgument("dataset.file_count must be >= 1");
    if (file_size_bytes < 1) throw InvalidArgument("dataset.file_size_bytes must be >= 1");
    if (samples_per_file < 1) throw InvalidArgument("dataset.samples_per_file must be >= 1");
  }

  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

/// Process layout and the shared storage fan-in seen by each process.
struct ClusterSpec {
  std::uint32_t nodes = 1;
  std::uint32_t procs_per_node = 1;
  std::uint32_t nodes_per_ssd = 1;
  std::uint32_t gfs_ost_count = 1;

  std::uint32_t total_procs() const noexcept { return nodes * procs_per_node; }
  /// Processes contending for one local SSD.
  std::uint32_t procs_per_ssd() const noexcept { return procs_per_node * nodes_per_ssd; }

  void validate() const {
    if (nodes < 1) throw InvalidArgument("cluster.nodes must be >= 1");
    if (procs_per_node < 1) throw InvalidArgument("cluster.procs_per_node must be >= 1");
    if (nodes_per_ssd < 1) throw InvalidArgument("cluster.nodes_per_ssd must be >= 1");
    if (gfs_ost_count < 1) throw InvalidArgument("cluster.gfs_ost_count must be >= 1");
  }

  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};

enum class CachePolicy { Pinning };

inline std::string to_string(CachePolicy) { return "pinning"; }

/// Pinned cache: a fixed subset of files lives on the local tier for the
/// whole run, so the hit rate equals the cached fraction.
struct CacheConfig {
  CacheRate cache_rate;
  CachePolicy policy = CachePolicy::Pinning;
};

/// Per-epoch global shuffle: rank -> ordered list of file ids.
struct ShufflePlan {
  std::uint32_t epoch = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<FileIndex>> assignment;

  std::size_t n_procs() const noexcept { return assignment.size(); }
  std::span<const FileIndex> files_of(Rank rank) const { return assignment.at(rank); }

  friend bool operator==(const ShufflePlan&, const ShufflePlan&) = default;
};

/// The cached set is always the k lowest file ids, {0, ..., k-1}.
struct CacheAssignment {
  std::uint64_t k = 0;
  std::uint64_t file_count = 0;

  bool contains(FileIndex id) const noexcept { return id < k; }
  auto cached_file_ids() const { return std::views::iota(FileIndex{0}, FileIndex{k}); }
  double hit_rate() const noexcept {
    return file_count == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(file_count);
  }
};

namespace detail {
inline constexpr std::uint64_t kShuffleStreamTag = 0x73687566666c6521ULL;  // "shuffle!"
}

/// Seeded permutation of all file ids, cut into n_procs contiguous chunks.
/// The first (file_count mod n_procs) ranks get one extra file.
///
/// Permutation: Fisher-Yates over [0, file_count) driven by SplitMix64 keyed
/// with (tag, seed, epoch); bounded draws use Lemire's unbiased method.
inline ShufflePlan build_shuffle_plan(const DatasetSpec& dataset, std::uint32_t n_procs,
                                      std::uint32_t epoch, std::uint64_t seed) {
  dataset.validate();
  if (n_procs == 0) throw InvalidArgument("n_procs must be >= 1");
  if (dataset.file_count < n_procs) {
    throw InvalidArgument("file_count (" + std::to_string(dataset.file_count) +
                          ") is smaller than n_procs (" + std::to_string(n_procs) + ")");
  }

  std::vector<FileIndex> order(dataset.file_count);
  for (FileIndex i = 0; i < order.size(); ++i) order[i] = i;
  auto rng = SplitMix64::keyed({detail::kShuffleStreamTag, seed, epoch});
  shuffle(std::span<FileIndex>(order), rng);

  ShufflePlan plan;
  plan.epoch = epoch;
  plan.seed = seed;
  plan.assignment.resize(n_procs);
  const std::uint64_t base = dataset.file_count / n_procs;
  const std::uint64_t extra = dataset.file_count % n_procs;
  auto it = order.begin();
  for (Rank r = 0; r < n_procs; ++r) {
    const auto len = static_cast<std::ptrdiff_t>(base + (r < extra ? 1 : 0));
    plan.assignment[r].assign(it, it + len);
    it += len;
  }
  return plan;
}

inline CacheAssignment assign_cache(const DatasetSpec& dataset, const CacheConfig& cache) {
  dataset.validate();
  const CacheRate& rate = cache.cache_rate;
  if (rate.numerator() < 0 || rate.numerator() > rate.denominator()) {
    throw InvalidArgument("cache_rate must lie in [0, 1]");
  }
  return CacheAssignment{rate.cached_count(dataset.file_count), dataset.file_count};
}

}  // namespace hsio
