#pragma once

// Fusion speed measurement around an external fusion command.
//
// Sidecar mode: the tool writes "pair_id,seconds" lines covering only its
// fusion call (model loading and I/O excluded) to the {timing} path; the
// harness ingests them. Wall mode: the harness times whole process
// invocations, so results are upper bounds.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/manifest.hpp"
#include "fusionbench/speed/subprocess.hpp"

namespace fusionbench {

enum class TimingMode { Sidecar, Wall };

constexpr std::string_view to_string(TimingMode m) noexcept {
  return m == TimingMode::Sidecar ? "sidecar" : "wall";
}

struct TimingRecord {
  std::string pair_id;
  double wall_time = 0;
  int run_index = 0;
  bool warmup = false;
};

struct TimingSummary {
  TimingMode mode = TimingMode::Sidecar;
  double mean_seconds = 0;
  std::size_t count = 0;
  /// Wall-mode numbers include process start-up and model loading.
  bool upper_bound = false;
  std::string host;
  std::vector<TimingRecord> records;
};

struct FusionJob {
  std::string pair_id;
  std::filesystem::path visible;
  std::filesystem::path infrared;
  std::filesystem::path output;
};

inline std::string host_descriptor() {
  std::string host = "unknown-host";
  char name[256] = {};
  if (gethostname(name, sizeof(name) - 1) == 0) host = name;
  std::string cpu = "unknown-cpu";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = std::string(detail::trim(line.substr(colon + 1)));
      break;
    }
  }
  return host + "; " + cpu + "; " + std::to_string(std::thread::hardware_concurrency()) +
         " threads";
}

/// Parses sidecar CSV. Blank lines and '#' comments are ignored; an
/// optional "pair_id,seconds" header is skipped.
inline std::vector<TimingRecord> parse_sidecar(std::string_view text,
                                               const std::set<std::string>& known_pairs,
                                               std::string_view source = "<sidecar>") {
  std::vector<TimingRecord> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::MalformedLine, where + ": expected 'pair_id,seconds'");
    }
    const std::string id(detail::trim(line.substr(0, comma)));
    const std::string secs(detail::trim(line.substr(comma + 1)));
    if (id == "pair_id" && secs == "seconds") continue;
    double seconds = 0;
    try {
      std::size_t used = 0;
      seconds = std::stod(secs, &used);
      if (used != secs.size()) throw std::invalid_argument(secs);
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedLine, where + ": '" + secs + "' is not a number");
    }
    if (!(seconds > 0.0) || !std::isfinite(seconds)) {
      throw Error(ErrorCode::MalformedLine, where + ": time must be positive");
    }
    if (!known_pairs.count(id)) {
      throw Error(ErrorCode::UnknownPairId, where + ": pair '" + id + "' is not in the manifest");
    }
    out.push_back({id, seconds, 0, false});
  }
  return out;
}

/// Mean over the non-warmup records.
inline TimingSummary summarize_timing(std::vector<TimingRecord> records, TimingMode mode,
                                      std::string host) {
  TimingSummary s;
  s.mode = mode;
  s.upper_bound = mode == TimingMode::Wall;
  s.host = std::move(host);
  double sum = 0;
  for (const auto& r : records) {
    if (r.warmup) continue;
    sum += r.wall_time;
    ++s.count;
  }
  if (s.count == 0) throw Error(ErrorCode::NoTimingData, "no non-warmup timing records");
  s.mean_seconds = sum / static_cast<double>(s.count);
  s.records = std::move(records);
  return s;
}

/// Ingests a sidecar produced by a persistent tool; the first
/// `warmup_count` lines are marked warm-up.
inline TimingSummary ingest_sidecar_file(const std::filesystem::path& path,
                                         const std::set<std::string>& known_pairs,
                                         int warmup_count) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::MissingSidecar, path.string());
  }
  auto records = parse_sidecar(read_text_file(path), known_pairs, path.string());
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].run_index = static_cast<int>(i);
    records[i].warmup = static_cast<int>(i) < warmup_count;
  }
  return summarize_timing(std::move(records), TimingMode::Sidecar, host_descriptor());
}

struct TimingOptions {
  TimingMode mode = TimingMode::Sidecar;
  int warmup_count = 1;
  int repeats = 1;
  /// Scratch directory for per-invocation sidecar files.
  std::filesystem::path scratch_dir = std::filesystem::temp_directory_path();
};

inline void check_template(std::string_view tmpl, TimingMode mode) {
  for (const char* key : {"{vis}", "{ir}", "{out}"}) {
    if (tmpl.find(key) == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("command template lacks placeholder ") + key);
    }
  }
  if (mode == TimingMode::Sidecar && tmpl.find("{timing}") == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument, "sidecar mode needs a {timing} placeholder");
  }
}

/// Runs the fusion command `warmup_count` times (cycling through the jobs)
/// and then `repeats` passes over every job, strictly one at a time.
inline TimingSummary time_fusion(std::string_view command_template,
                                 const std::vector<FusionJob>& jobs,
                                 const TimingOptions& options = {}) {
  check_template(command_template, options.mode);
  if (options.repeats <= 0 || jobs.empty()) {
    throw Error(ErrorCode::NoTimingData, "nothing to time: repeats=" +
                                             std::to_string(options.repeats) + ", pairs=" +
                                             std::to_string(jobs.size()));
  }
  std::set<std::string> known;
  for (const auto& j : jobs) known.insert(j.pair_id);

  std::error_code ec;
  std::filesystem::create_directories(options.scratch_dir, ec);
  std::vector<TimingRecord> records;
  int invocation = 0;

  auto run_one = [&](const FusionJob& job, int run_index, bool warmup) {
    const std::filesystem::path sidecar =
        options.scratch_dir / ("timing_" + std::to_string(::getpid()) + "_" +
                               std::to_string(invocation++) + ".csv");
    std::filesystem::remove(sidecar, ec);
    if (job.output.has_parent_path()) std::filesystem::create_directories(job.output.parent_path(), ec);
    const std::string cmd = expand_template(command_template, {{"vis", job.visible.string()},
                                                               {"ir", job.infrared.string()},
                                                               {"out", job.output.string()},
                                                               {"timing", sidecar.string()},
                                                               {"pair", job.pair_id}});
    const auto start = std::chrono::steady_clock::now();
    const int status = run_shell(cmd);
    const auto stop = std::chrono::steady_clock::now();
    if (status != 0) {
      throw Error(ErrorCode::CommandFailed, "pair " + job.pair_id + ": command exited with " +
                                                std::to_string(status) + ": " + cmd);
    }
    if (options.mode == TimingMode::Wall) {
      records.push_back(
          {job.pair_id, std::chrono::duration<double>(stop - start).count(), run_index, warmup});
      return;
    }
    if (!std::filesystem::is_regular_file(sidecar, ec)) {
      throw Error(ErrorCode::MissingSidecar,
                  "pair " + job.pair_id + ": tool wrote no timing file " + sidecar.string());
    }
    auto lines = parse_sidecar(read_text_file(sidecar), known, sidecar.string());
    std::filesystem::remove(sidecar, ec);
    if (lines.empty()) {
      throw Error(ErrorCode::MissingSidecar, "pair " + job.pair_id + ": empty timing file");
    }
    for (auto& r : lines) {
      r.run_index = run_index;
      r.warmup = warmup;
      records.push_back(std::move(r));
    }
  };

  for (int w = 0; w < options.warmup_count; ++w) {
    run_one(jobs[static_cast<std::size_t>(w) % jobs.size()], w, true);
  }
  for (int r = 0; r < options.repeats; ++r) {
    for (const auto& job : jobs) run_one(job, r, false);
  }
  return summarize_timing(std::move(records), options.mode, host_descriptor());
}

}  // namespace fusionbench
