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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "hsio/breakdown.hpp"
#include "hsio/config.hpp"
#include "hsio/error.hpp"
#include "hsio/reports.hpp"
#include "hsio/storage_sim.hpp"
#include "hsio/trace_ingest.hpp"
#include "hsio/whatif.hpp"

namespace hsio::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

namespace fs = std::filesystem;

/// trace_r{rate_pct}_e{epoch}.jsonl
inline std::string trace_file_name(const SweepCellKey& key) {
  return "trace_r" + key.rate.percent_string() + "_e" + std::to_string(key.epoch) + ".jsonl";
}

inline std::optional<SweepCellKey> parse_trace_file_name(const std::string& name) {
  static const std::regex kPattern(R"(^trace_r([0-9]+(?:\.[0-9]+)?)_e([0-9]+)\.jsonl$)");
  std::smatch m;
  if (!std::regex_match(name, m, kPattern)) return std::nullopt;
  try {
    const auto epoch = parse_integer<std::uint32_t>(m[2].str());
    if (!epoch) return std::nullopt;
    return SweepCellKey{CacheRate::parse_percent(m[1].str()), *epoch};
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

namespace detail {

/// Opens `path` for writing, or returns std::cout for "-" / empty.
class OutputFile {
 public:
  explicit OutputFile(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw DataError("cannot open " + path + " for writing");
    stream_ = &file_;
  }
  std::ostream& stream() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw DataError("write failure");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

inline SweepResult load_breakdowns(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return read_breakdown_lines(in);
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const EmptyResult& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace detail

/// Writes one native trace per (cache rate, epoch) into out_dir.
inline int simulate(const RunConfig& config, const std::string& out_dir, std::ostream& err) {
  return detail::guarded(err, [&] {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create " + out_dir + ": " + ec.message());
    std::size_t files = 0;
    for_each_sweep_cell(config.sim_config(), config.sweep,
                        [&](const SweepCellKey& key, const EpochTrace& trace) {
                          const fs::path path = fs::path(out_dir) / trace_file_name(key);
                          std::ofstream out(path, std::ios::binary | std::ios::trunc);
                          if (!out) throw DataError("cannot open " + path.string() + " for writing");
                          write_native_trace(trace.records, out);
                          ++files;
                        });
    err << "wrote " << files << " trace files to " << out_dir << '\n';
    return kExitOk;
  });
}

inline int cmd_simulate(const std::string& config_path, const std::string& out_dir, std::ostream& err) {
  RunConfig config;
  if (int rc = detail::guarded(err, [&] {
        config = load_run_config(config_path);
        return kExitOk;
      });
      rc != kExitOk) {
    return rc;
  }
  return simulate(config, out_dir, err);
}

struct IngestOptions {
  std::string input = "-";
  MountMap mounts;
  std::uint32_t epoch = 0;
  bool strict = false;
  std::string output = "-";
};

inline int cmd_ingest(const IngestOptions& opt, std::istream& in, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    opt.mounts.validate();
    std::ifstream file;
    std::istream* src = &in;
    if (!opt.input.empty() && opt.input != "-") {
      file.open(opt.input, std::ios::binary);
      if (!file) throw DataError("cannot open " + opt.input);
      src = &file;
    }
    const DarshanIngest result = parse_darshan_text(
        *src, opt.mounts, opt.epoch, opt.strict ? Strictness::Strict : Strictness::Lenient);
    if (!opt.strict) {
      for (const auto& w : result.warnings) err << "warning: " << w << '\n';
      err << "skipped " << result.warnings.size() << " record(s) (" << result.skipped_lines
          << " counter line(s))\n";
    }
    detail::OutputFile sink(opt.output, out);
    write_native_trace(result.records, sink.stream());
    sink.finish();
    return kExitOk;
  });
}

/// Expands directories to their trace_r*_e*.jsonl members, sorted by name.
inline std::vector<fs::path> collect_trace_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && parse_trace_file_name(entry.path().filename().string())) {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      if (!parse_trace_file_name(p.filename().string())) {
        throw InvalidArgument(in + ": trace file names must follow trace_r<rate_pct>_e<epoch>.jsonl");
      }
      files.push_back(p);
    } else {
      throw InvalidArgument(in + ": no such file or directory");
    }
  }
  return files;
}

struct AnalyzeOptions {
  std::vector<std::string> inputs;
  std::string summary = "-";
  std::string breakdowns;  // empty: not written
};

inline int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto files = collect_trace_files(opt.inputs);
    if (files.empty()) throw InvalidArgument("no trace files found");
    std::map<SweepCellKey, std::vector<IoRecord>> traces;
    for (const auto& path : files) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw DataError("cannot open " + path.string());
      std::vector<IoRecord> records;
      try {
        records = parse_native_trace(in);
      } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
      }
      auto& cell = traces[*parse_trace_file_name(path.filename().string())];
      cell.insert(cell.end(), std::make_move_iterator(records.begin()),
                  std::make_move_iterator(records.end()));
    }
    const SweepResult sweep = sweep_analysis(traces);
    detail::OutputFile summary(opt.summary, out);
    write_summary_csv(sweep, summary.stream());
    summary.finish();
    if (!opt.breakdowns.empty()) {
      detail::OutputFile lines(opt.breakdowns, out);
      write_breakdown_lines(sweep, lines.stream());
      lines.finish();
    }
    return kExitOk;
  });
}

inline std::string valid_class_names() {
  std::string s;
  for (IoClass c : kIoClasses) {
    if (!s.empty()) s += ", ";
    s += to_string(c);
  }
  return s;
}

inline IoClass parse_class_arg(const std::string& token) {
  if (auto c = parse_io_class(token)) return *c;
  throw InvalidArgument("unknown I/O class '" + token + "'; valid names: " + valid_class_names());
}

/// "GFS-META=50" -> {GFS-META, 50}.
inline ClassImprovement parse_improvement_arg(const std::string& token) {
  const auto eq = token.find('=');
  if (eq == std::string::npos) {
    throw InvalidArgument("improvement '" + token + "' must look like CLASS=PERCENT");
  }
  const IoClass c = parse_class_arg(token.substr(0, eq));
  const auto pct = parse_double(token.substr(eq + 1));
  if (!pct || !std::isfinite(*pct) || *pct < 0.0) {
    throw InvalidArgument("improvement percentage in '" + token + "' must be a non-negative number");
  }
  return ClassImprovement{c, *pct};
}

struct EstimateOptions {
  std::string breakdowns;
  std::uint32_t epoch = 2;
  std::vector<std::string> improvements;
  std::string output = "-";
};

inline int cmd_estimate(const EstimateOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    ImprovementSpec imp;
    for (const auto& t : opt.improvements) imp.entries.push_back(parse_improvement_arg(t));
    imp.validate();
    const SweepResult sweep = detail::load_breakdowns(opt.breakdowns);
    const EstimateComparison cmp = compare_best(sweep, opt.epoch, imp);
    detail::OutputFile sink(opt.output, out);
    write_estimate_csv(cmp, opt.epoch, imp, sink.stream());
    sink.finish();
    return kExitOk;
  });
}

struct ExploreOptions {
  std::string breakdowns;
  std::uint32_t epoch = 2;
  std::string class_a = "GFS-META";
  std::string class_b = "LFS-READ";
  double max_percent = 200.0;
  double step = 10.0;
  double goal_s = 0.0;
  std::string output = "-";
};

inline int cmd_explore(const ExploreOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const IoClass a = parse_class_arg(opt.class_a);
    const IoClass b = parse_class_arg(opt.class_b);
    const SweepResult sweep = detail::load_breakdowns(opt.breakdowns);
    const FeasibilityGrid grid = explore_grid(sweep, opt.epoch, a, b, opt.max_percent, opt.step, opt.goal_s);
    detail::OutputFile sink(opt.output, out);
    write_grid_csv(grid, sink.stream());
    sink.finish();
    return kExitOk;
  });
}

inline int cmd_preset(const std::string& name, const std::string& output, std::ostream& out,
                      std::ostream& err) {
  return detail::guarded(err, [&] {
    const RunConfig c = preset(name);
    detail::OutputFile sink(output, out);
    sink.stream() << to_json(c).dump(2) << '\n';
    sink.finish();
    return kExitOk;
  });
}

}  // namespace hsio::cli
