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
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hsio/error.hpp"
#include "hsio/format.hpp"
#include "hsio/io_record.hpp"

namespace hsio {

/// Path-prefix table deciding which tier a file lives on. Longest prefix
/// wins; a prefix matches only on a path-component boundary.
struct MountMap {
  std::vector<std::string> gfs_prefixes;
  std::vector<std::string> lfs_prefixes;

  void validate() const {
    if (gfs_prefixes.empty()) throw InvalidArgument("mounts.gfs_prefixes must not be empty");
    if (lfs_prefixes.empty()) throw InvalidArgument("mounts.lfs_prefixes must not be empty");
    for (const auto* list : {&gfs_prefixes, &lfs_prefixes}) {
      for (const auto& p : *list) {
        if (p.empty() || p.front() != '/') {
          throw InvalidArgument("mount prefix '" + p + "' is not an absolute path");
        }
      }
    }
    for (const auto& g : gfs_prefixes) {
      for (const auto& l : lfs_prefixes) {
        if (normalized(g) == normalized(l)) {
          throw InvalidArgument("mount prefix '" + g + "' is listed as both GFS and LFS");
        }
      }
    }
  }

  std::optional<FsTier> resolve(std::string_view path) const {
    std::size_t best_len = 0;
    std::optional<FsTier> best;
    auto scan = [&](const std::vector<std::string>& prefixes, FsTier tier) {
      for (const auto& raw : prefixes) {
        const std::string p = normalized(raw);
        if (!matches(path, p)) continue;
        if (!best || p.size() > best_len) {
          best_len = p.size();
          best = tier;
        }
      }
    };
    scan(gfs_prefixes, FsTier::GFS);
    scan(lfs_prefixes, FsTier::LFS);
    return best;
  }

 private:
  static std::string normalized(std::string p) {
    while (p.size() > 1 && p.back() == '/') p.pop_back();
    return p;
  }

  static bool matches(std::string_view path, std::string_view prefix) {
    if (prefix == "/") return !path.empty() && path.front() == '/';
    if (path.substr(0, prefix.size()) != prefix) return false;
    return path.size() == prefix.size() || path[prefix.size()] == '/';
  }
};

enum class Strictness { Strict, Lenient };

struct DarshanIngest {
  std::vector<IoRecord> records;
  /// One entry per skipped (rank, record id) in lenient mode.
  std::vector<std::string> warnings;
  /// Counter lines (of the two consumed counters) that were skipped.
  std::size_t skipped_lines = 0;
};

inline constexpr std::string_view kReadTimeCounter = "POSIX_F_READ_TIME";
inline constexpr std::string_view kMetaTimeCounter = "POSIX_F_META_TIME";

/// Reads darshan-parser text output. Data lines carry eight whitespace
/// separated fields:
///   <module> <rank> <record id> <counter> <value> <file name> <mount pt> <fs type>
/// Only POSIX_F_READ_TIME and POSIX_F_META_TIME of the POSIX module are
/// consumed; the two counters of one (rank, record id) merge into one record.
/// The fs type column is ignored in favour of `mounts`.
inline DarshanIngest parse_darshan_text(std::istream& in, const MountMap& mounts, std::uint32_t epoch,
                                        Strictness strictness) {
  mounts.validate();
  DarshanIngest out;
  std::map<std::pair<std::int64_t, std::string>, std::size_t> index;
  std::map<std::pair<std::int64_t, std::string>, std::pair<bool, bool>> seen_counters;
  std::set<std::pair<std::int64_t, std::string>> skipped;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::vector<std::string> f;
    for (std::string tok; fields >> tok;) f.push_back(std::move(tok));
    if (f.size() != 8) {
      throw DataError("expected 8 fields, found " + std::to_string(f.size()), lineno);
    }
    const std::string& module = f[0];
    const std::string& counter = f[3];
    if (module != "POSIX") continue;
    const bool is_read = counter == kReadTimeCounter;
    const bool is_meta = counter == kMetaTimeCounter;
    if (!is_read && !is_meta) continue;

    const auto rank = parse_integer<std::int64_t>(f[1]);
    if (!rank || *rank < -1) throw DataError("invalid rank '" + f[1] + "'", lineno);
    const auto value = parse_double(f[4]);
    if (!value || !std::isfinite(*value) || *value < 0.0) {
      throw DataError("invalid " + counter + " value '" + f[4] + "'", lineno);
    }
    auto key = std::make_pair(*rank, f[2]);
    const std::string& path = f[5];

    auto skip = [&](const std::string& why) {
      if (strictness == Strictness::Strict) throw DataError(why, lineno);
      ++out.skipped_lines;
      if (skipped.insert(key).second) {
        out.warnings.push_back("line " + std::to_string(lineno) + ": skipped: " + why);
      }
    };

    if (*rank == -1) {
      skip("unattributable shared record (rank -1) for " + path);
      continue;
    }
    const auto tier = mounts.resolve(path);
    if (!tier) {
      skip("no mount prefix matches " + path);
      continue;
    }

    auto [it, inserted] = index.try_emplace(key, out.records.size());
    if (inserted) {
      IoRecord rec;
      rec.rank = static_cast<Rank>(*rank);
      rec.epoch = epoch;
      if (auto id = parse_integer<std::uint64_t>(f[2])) rec.file_id = FileId(*id);
      else rec.file_id = FileId(f[2]);
      rec.fs = *tier;
      out.records.push_back(std::move(rec));
    }
    auto& seen = seen_counters[key];
    bool& flag = is_read ? seen.first : seen.second;
    if (flag) throw DataError("duplicate " + counter + " for rank " + f[1] + " record " + f[2], lineno);
    flag = true;
    IoRecord& rec = out.records[it->second];
    if (rec.fs != *tier) throw DataError("record " + f[2] + " resolves to two filesystems", lineno);
    (is_read ? rec.read_s : rec.meta_s) = *value;
  }
  if (in.bad()) throw DataError("read failure");
  return out;
}

/// One JSON object per line, keys in fixed order:
///   {"rank":0,"epoch":2,"file_id":5,"fs":"LFS","bytes":131072,"read_s":0.001,"meta_s":0.0001}
/// Times use the shortest decimal that round-trips exactly.
inline void write_native_record(const IoRecord& r, std::ostream& out) {
  out << "{\"rank\":" << r.rank << ",\"epoch\":" << r.epoch << ",\"file_id\":";
  if (r.file_id.is_integer()) out << r.file_id.integer();
  else out << nlohmann::json(r.file_id.text()).dump();
  out << ",\"fs\":\"" << to_string(r.fs) << "\",\"bytes\":" << r.bytes
      << ",\"read_s\":" << format_shortest(r.read_s) << ",\"meta_s\":" << format_shortest(r.meta_s)
      << "}\n";
}

inline void write_native_trace(std::span<const IoRecord> records, std::ostream& out) {
  for (const IoRecord& r : records) write_native_record(r, out);
  out.flush();
  if (!out) throw DataError("failed to write trace");
}

namespace detail {

inline std::uint64_t json_unsigned(const nlohmann::json& v, const char* key, std::size_t lineno) {
  if (!v.is_number_integer()) throw DataError(std::string("field '") + key + "' must be a non-negative integer", lineno);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto s = v.get<std::int64_t>();
  if (s < 0) throw DataError(std::string("field '") + key + "' must be non-negative", lineno);
  return static_cast<std::uint64_t>(s);
}

inline double json_seconds(const nlohmann::json& v, const char* key, std::size_t lineno) {
  if (!v.is_number()) throw DataError(std::string("field '") + key + "' must be a number", lineno);
  const double d = v.get<double>();
  if (!std::isfinite(d) || d < 0.0) throw DataError(std::string("field '") + key + "' must be a non-negative time", lineno);
  return d;
}

}  // namespace detail

inline IoRecord parse_native_record(std::string_view line, std::size_t lineno) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what(), lineno);
  }
  if (!j.is_object()) throw DataError("record is not an object", lineno);
  static constexpr const char* kKeys[] = {"rank", "epoch", "file_id", "fs", "bytes", "read_s", "meta_s"};
  for (const char* k : kKeys) {
    if (!j.contains(k)) throw DataError(std::string("missing field '") + k + "'", lineno);
  }
  for (const auto& [k, _] : j.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* x) { return k == x; }) ==
        std::end(kKeys)) {
      throw DataError("unknown field '" + k + "'", lineno);
    }
  }

  IoRecord r;
  const auto rank = detail::json_unsigned(j["rank"], "rank", lineno);
  const auto epoch = detail::json_unsigned(j["epoch"], "epoch", lineno);
  if (rank > UINT32_MAX || epoch > UINT32_MAX) throw DataError("rank or epoch out of range", lineno);
  r.rank = static_cast<Rank>(rank);
  r.epoch = static_cast<std::uint32_t>(epoch);
  const auto& id = j["file_id"];
  if (id.is_string()) r.file_id = FileId(id.get<std::string>());
  else r.file_id = FileId(detail::json_unsigned(id, "file_id", lineno));
  if (!j["fs"].is_string()) throw DataError("field 'fs' must be a string", lineno);
  const auto fs = parse_fs_tier(j["fs"].get<std::string>());
  if (!fs) throw DataError("unknown fs tag '" + j["fs"].get<std::string>() + "' (expected GFS or LFS)", lineno);
  r.fs = *fs;
  r.bytes = detail::json_unsigned(j["bytes"], "bytes", lineno);
  r.read_s = detail::json_seconds(j["read_s"], "read_s", lineno);
  r.meta_s = detail::json_seconds(j["meta_s"], "meta_s", lineno);
  return r;
}

/// Records in file order. Blank lines are ignored.
inline std::vector<IoRecord> parse_native_trace(std::istream& in) {
  std::vector<IoRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_native_record(line, lineno));
  }
  if (in.bad()) throw DataError("read failure");
  return out;
}

}  // namespace hsio
