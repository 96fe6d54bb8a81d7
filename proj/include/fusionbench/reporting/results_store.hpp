#pragma once

// Results store: JSON Lines. The first line is a header echoing the metric
// constants; every following line is one record for a
// (pair, algorithm, metric) key. New records are appended; replacing
// existing keys (overwrite) rewrites the file.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/manifest.hpp"
#include "fusionbench/metrics/types.hpp"

namespace fusionbench {

inline constexpr int kResultsSchemaVersion = 1;

struct MetricRecord {
  std::string pair_id;
  Scenario scenario = Scenario::Other;
  std::string algorithm;
  Metric metric = Metric::EN;
  double value = 0;
  std::optional<std::pair<double, double>> components;
  /// Speed records only.
  std::optional<std::string> timing_mode;
  std::optional<std::string> host;

  std::tuple<std::string, std::string, Metric> key() const { return {pair_id, algorithm, metric}; }
};

inline nlohmann::json to_json(const MetricRecord& r) {
  nlohmann::json j = {{"kind", "metric"},
                      {"pair_id", r.pair_id},
                      {"scenario", std::string(to_string(r.scenario))},
                      {"algorithm", r.algorithm},
                      {"metric", std::string(to_string(r.metric))},
                      {"value", r.value}};
  if (r.components) j["components"] = {r.components->first, r.components->second};
  if (r.timing_mode) j["timing_mode"] = *r.timing_mode;
  if (r.host) j["host"] = *r.host;
  return j;
}

inline MetricRecord record_from_json(const nlohmann::json& j, const std::string& where) {
  try {
    MetricRecord r;
    r.pair_id = j.at("pair_id").get<std::string>();
    auto sc = parse_scenario(j.at("scenario").get<std::string>());
    auto m = parse_metric(j.at("metric").get<std::string>());
    if (!sc || !m) throw Error(ErrorCode::SchemaViolation, where + ": bad scenario or metric");
    r.scenario = *sc;
    r.metric = *m;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.value = j.at("value").get<double>();
    if (j.contains("components")) {
      r.components = {j.at("components").at(0).get<double>(),
                      j.at("components").at(1).get<double>()};
    }
    if (j.contains("timing_mode")) r.timing_mode = j.at("timing_mode").get<std::string>();
    if (j.contains("host")) r.host = j.at("host").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::SchemaViolation, where + ": " + ex.what());
  }
}

class ResultsStore {
 public:
  /// Opens `path`, loading any existing records.
  explicit ResultsStore(std::filesystem::path path) : path_(std::move(path)) {
    std::error_code ec;
    if (!std::filesystem::exists(path_, ec)) return;
    std::ifstream in(path_);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path_.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string where = path_.string() + ":" + std::to_string(line_no);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& ex) {
        throw Error(ErrorCode::SchemaViolation, where + ": " + ex.what());
      }
      const std::string kind = j.value("kind", "");
      if (kind == "header") {
        if (j.value("schema_version", 0) != kResultsSchemaVersion) {
          throw Error(ErrorCode::SchemaViolation, where + ": unsupported results schema");
        }
        const nlohmann::json constants = j.value("constants", nlohmann::json::object());
        for (const auto& [k, v] : constants.items()) {
          constants_[k] = v.get<std::string>();
        }
        has_header_ = true;
      } else if (kind == "metric") {
        add_loaded(record_from_json(j, where), where);
      } else {
        throw Error(ErrorCode::SchemaViolation, where + ": unknown record kind '" + kind + "'");
      }
    }
  }

  const std::filesystem::path& path() const noexcept { return path_; }
  const std::vector<MetricRecord>& records() const noexcept { return records_; }
  const std::map<std::string, std::string>& constants() const noexcept { return constants_; }

  /// Adds records and persists them. Without `overwrite`, a key that is
  /// already stored (or repeated within `incoming`) is a DuplicateRecord and
  /// nothing is written.
  void commit(const std::vector<MetricRecord>& incoming, bool overwrite,
              const std::map<std::string, std::string>& constants = {}) {
    std::set<std::tuple<std::string, std::string, Metric>> batch;
    bool replaced = false;
    for (const auto& r : incoming) {
      if (!batch.insert(r.key()).second) {
        throw Error(ErrorCode::DuplicateRecord, describe(r) + " repeated in one batch");
      }
      if (index_.count(r.key())) {
        if (!overwrite) throw Error(ErrorCode::DuplicateRecord, describe(r) + " already stored");
        replaced = true;
      }
    }
    bool constants_changed = false;
    for (const auto& [k, v] : constants) {
      auto it = constants_.find(k);
      if (it == constants_.end() || it->second != v) {
        constants_[k] = v;
        constants_changed = true;
      }
    }
    std::vector<MetricRecord> appended;
    for (const auto& r : incoming) {
      auto it = index_.find(r.key());
      if (it != index_.end()) {
        records_[it->second] = r;
      } else {
        index_[r.key()] = records_.size();
        records_.push_back(r);
        appended.push_back(r);
      }
    }
    if (replaced || !has_header_ || constants_changed) {
      rewrite();
    } else {
      append(appended);
    }
  }

 private:
  static std::string describe(const MetricRecord& r) {
    return "record (pair=" + r.pair_id + ", algorithm=" + r.algorithm +
           ", metric=" + std::string(to_string(r.metric)) + ")";
  }

  void add_loaded(MetricRecord r, const std::string& where) {
    if (index_.count(r.key())) {
      throw Error(ErrorCode::DuplicateRecord, where + ": " + describe(r) + " stored twice");
    }
    index_[r.key()] = records_.size();
    records_.push_back(std::move(r));
  }

  nlohmann::json header() const {
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [k, v] : constants_) c[k] = v;
    return {{"kind", "header"},
            {"format", "fusionbench-results"},
            {"schema_version", kResultsSchemaVersion},
            {"constants", c}};
  }

  void rewrite() {
    if (path_.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path_.parent_path(), ec);
    }
    const auto tmp = std::filesystem::path(path_.string() + ".tmp");
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
      out << header().dump() << '\n';
      for (const auto& r : records_) out << to_json(r).dump() << '\n';
      if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path_);
    has_header_ = true;
  }

  void append(const std::vector<MetricRecord>& records) {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot append to " + path_.string());
    for (const auto& r : records) out << to_json(r).dump() << '\n';
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path_.string());
  }

  std::filesystem::path path_;
  bool has_header_ = false;
  std::map<std::string, std::string> constants_;
  std::vector<MetricRecord> records_;
  std::map<std::tuple<std::string, std::string, Metric>, std::size_t> index_;
};

}  // namespace fusionbench
