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
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsio/error.hpp"
#include "hsio/storage_sim.hpp"
#include "hsio/trace_ingest.hpp"
#include "hsio/workload.hpp"

namespace hsio {

/// Recorded with a run for provenance; has no effect on modelled I/O.
struct TrainingOptions {
  std::uint32_t batch_size = 1;
  bool prefetch = true;
};

struct RunConfig {
  DatasetSpec dataset;
  ClusterSpec cluster;
  StorageProfile storage;
  SimOptions sim;
  std::vector<CacheRate> sweep;
  TrainingOptions training;
  std::optional<MountMap> mounts;

  SimConfig sim_config() const { return SimConfig{dataset, cluster, storage, sim}; }
};

/// Configuration problem, naming the offending key path.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& field, const std::string& why)
      : InvalidArgument(field + ": " + why), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

namespace detail {

using Json = nlohmann::json;

inline void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> required,
                       std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) throw ConfigError(where.empty() ? "<root>" : where, "expected an object");
  auto path = [&](const std::string& k) { return where.empty() ? k : where + "." + k; };
  for (const char* k : required) {
    if (!obj.contains(k)) throw ConfigError(path(k), "missing required key");
  }
  for (const auto& [k, _] : obj.items()) {
    bool known = false;
    for (const char* r : required) known = known || k == r;
    for (const char* o : optional) known = known || k == o;
    if (!known) throw ConfigError(path(k), "unknown key");
  }
}

template <typename Int>
Int get_uint(const Json& obj, const std::string& where, const char* key) {
  const Json& v = obj.at(key);
  if (!v.is_number_unsigned()) throw ConfigError(where + "." + key, "expected a non-negative integer");
  const auto x = v.get<std::uint64_t>();
  if (x > std::numeric_limits<Int>::max()) throw ConfigError(where + "." + key, "value out of range");
  return static_cast<Int>(x);
}

inline double get_number(const Json& obj, const std::string& where, const char* key) {
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key, "expected a number");
  return v.get<double>();
}

inline std::vector<std::string> get_paths(const Json& obj, const std::string& where, const char* key) {
  const Json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key, "expected an array of paths");
  std::vector<std::string> out;
  for (const auto& p : v) {
    if (!p.is_string()) throw ConfigError(where + "." + key, "expected an array of paths");
    out.push_back(p.get<std::string>());
  }
  return out;
}

template <typename F>
void validated(const std::string& field, F&& check) {
  try {
    check();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace detail

/// Parses and validates a run configuration. Unknown keys are rejected.
inline RunConfig parse_run_config(const nlohmann::json& j) {
  using detail::check_keys;
  using detail::get_number;
  using detail::get_uint;
  check_keys(j, "", {"dataset", "cluster", "storage", "sim", "sweep"},
             {"cache_policy", "training", "mounts"});
  RunConfig c;

  const auto& d = j["dataset"];
  check_keys(d, "dataset", {"file_count", "file_size_bytes"}, {"samples_per_file"});
  c.dataset.file_count = get_uint<std::uint64_t>(d, "dataset", "file_count");
  c.dataset.file_size_bytes = get_uint<std::uint64_t>(d, "dataset", "file_size_bytes");
  if (d.contains("samples_per_file")) {
    c.dataset.samples_per_file = get_uint<std::uint64_t>(d, "dataset", "samples_per_file");
  }
  detail::validated("dataset", [&] { c.dataset.validate(); });

  const auto& cl = j["cluster"];
  check_keys(cl, "cluster", {"nodes", "procs_per_node", "nodes_per_ssd", "gfs_ost_count"});
  c.cluster.nodes = get_uint<std::uint32_t>(cl, "cluster", "nodes");
  c.cluster.procs_per_node = get_uint<std::uint32_t>(cl, "cluster", "procs_per_node");
  c.cluster.nodes_per_ssd = get_uint<std::uint32_t>(cl, "cluster", "nodes_per_ssd");
  c.cluster.gfs_ost_count = get_uint<std::uint32_t>(cl, "cluster", "gfs_ost_count");
  detail::validated("cluster", [&] { c.cluster.validate(); });

  const auto& s = j["storage"];
  check_keys(s, "storage",
             {"ost_read_bw", "ssd_read_bw", "gfs_meta_base_s", "gfs_meta_capacity", "lfs_meta_s"});
  c.storage.ost_read_bw = get_number(s, "storage", "ost_read_bw");
  c.storage.ssd_read_bw = get_number(s, "storage", "ssd_read_bw");
  c.storage.gfs_meta_base_s = get_number(s, "storage", "gfs_meta_base_s");
  c.storage.gfs_meta_capacity = get_number(s, "storage", "gfs_meta_capacity");
  c.storage.lfs_meta_s = get_number(s, "storage", "lfs_meta_s");
  detail::validated("storage", [&] { c.storage.validate(); });

  const auto& sim = j["sim"];
  check_keys(sim, "sim", {"seed", "jitter_sigma", "epochs"});
  c.sim.seed = get_uint<std::uint64_t>(sim, "sim", "seed");
  c.sim.jitter_sigma = get_number(sim, "sim", "jitter_sigma");
  c.sim.epochs = get_uint<std::uint32_t>(sim, "sim", "epochs");
  detail::validated("sim", [&] { c.sim.validate(); });

  const auto& sweep = j["sweep"];
  if (!sweep.is_array()) throw ConfigError("sweep", "expected an array of cache rates in percent");
  for (const auto& v : sweep) {
    if (!v.is_number()) throw ConfigError("sweep", "expected an array of cache rates in percent");
    detail::validated("sweep", [&] { c.sweep.push_back(CacheRate::from_percent(v.get<double>())); });
  }
  detail::validated("sweep", [&] { validate_sweep_rates(c.sweep); });

  if (j.contains("cache_policy")) {
    if (j["cache_policy"] != "pinning") throw ConfigError("cache_policy", "only \"pinning\" is supported");
  }
  if (j.contains("training")) {
    const auto& t = j["training"];
    check_keys(t, "training", {}, {"batch_size", "prefetch"});
    if (t.contains("batch_size")) c.training.batch_size = get_uint<std::uint32_t>(t, "training", "batch_size");
    if (t.contains("prefetch")) {
      if (!t["prefetch"].is_boolean()) throw ConfigError("training.prefetch", "expected true or false");
      c.training.prefetch = t["prefetch"].get<bool>();
    }
  }
  if (j.contains("mounts")) {
    const auto& m = j["mounts"];
    check_keys(m, "mounts", {"gfs_prefixes", "lfs_prefixes"});
    MountMap mounts{detail::get_paths(m, "mounts", "gfs_prefixes"),
                    detail::get_paths(m, "mounts", "lfs_prefixes")};
    detail::validated("mounts", [&] { mounts.validate(); });
    c.mounts = std::move(mounts);
  }
  detail::validated("dataset.file_count", [&] { c.sim_config().validate(); });
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
  return parse_run_config(j);
}

inline nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["dataset"] = {{"file_count", c.dataset.file_count},
                  {"file_size_bytes", c.dataset.file_size_bytes},
                  {"samples_per_file", c.dataset.samples_per_file}};
  j["cluster"] = {{"nodes", c.cluster.nodes},
                  {"procs_per_node", c.cluster.procs_per_node},
                  {"nodes_per_ssd", c.cluster.nodes_per_ssd},
                  {"gfs_ost_count", c.cluster.gfs_ost_count}};
  j["storage"] = {{"ost_read_bw", c.storage.ost_read_bw},
                  {"ssd_read_bw", c.storage.ssd_read_bw},
                  {"gfs_meta_base_s", c.storage.gfs_meta_base_s},
                  {"gfs_meta_capacity", c.storage.gfs_meta_capacity},
                  {"lfs_meta_s", c.storage.lfs_meta_s}};
  j["sim"] = {{"seed", c.sim.seed}, {"jitter_sigma", c.sim.jitter_sigma}, {"epochs", c.sim.epochs}};
  auto sweep = nlohmann::ordered_json::array();
  for (const auto& r : c.sweep) sweep.push_back(nlohmann::ordered_json::parse(r.percent_string()));
  j["sweep"] = sweep;
  j["cache_policy"] = "pinning";
  j["training"] = {{"batch_size", c.training.batch_size}, {"prefetch", c.training.prefetch}};
  if (c.mounts) {
    j["mounts"] = {{"gfs_prefixes", c.mounts->gfs_prefixes}, {"lfs_prefixes", c.mounts->lfs_prefixes}};
  }
  return j;
}

inline std::vector<CacheRate> percent_range(int first, int last, int step) {
  std::vector<CacheRate> out;
  for (int p = first; p <= last; p += step) out.push_back(CacheRate::from_fraction(p, 100));
  return out;
}

/// Built-in scenarios: 768 nodes x 4 processes, one SSD per 16 nodes, a
/// 72 GiB dataset of either 128 KiB or 12 MiB files, and a GFS with 60 OSTs
/// ("fast") or 1 OST ("slow"). Storage constants are calibrated only to give
/// the qualitative regimes, not absolute timings of any real machine.
inline std::vector<std::string> preset_names() { return {"small-fast", "small-slow", "large-fast"}; }

inline RunConfig preset(const std::string& name) {
  RunConfig c;
  c.cluster = ClusterSpec{768, 4, 16, 60};
  c.storage = StorageProfile{1.0e9, 3.0e8, 2.0e-4, 750.0, 5.0e-4};
  c.sim = SimOptions{20220601, 0.02, 3};
  c.sweep = percent_range(0, 100, 5);
  c.mounts = MountMap{{"/vol0001"}, {"/local"}};
  if (name == "small-fast" || name == "small-slow") {
    c.dataset = DatasetSpec{589824, 128 * 1024, 1};
    c.training.batch_size = 12;
    if (name == "small-slow") c.cluster.gfs_ost_count = 1;
  } else if (name == "large-fast") {
    c.dataset = DatasetSpec{6144, 12 * 1024 * 1024, 1};
    c.training.batch_size = 2;
  } else {
    throw InvalidArgument("unknown preset '" + name + "'");
  }
  return c;
}

}  // namespace hsio
