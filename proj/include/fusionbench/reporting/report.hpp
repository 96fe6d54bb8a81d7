#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/manifest.hpp"
#include "fusionbench/metrics/types.hpp"
#include "fusionbench/reporting/results_store.hpp"

namespace fusionbench {

struct ReportCell {
  double mean = 0;
  double std = 0;
  std::size_t count = 0;
  /// 1 = best. 0 for empty cells.
  int rank = 0;
  /// Mean equals another cell's mean in the same ranking group.
  bool tie = false;
  bool empty = false;
};

struct MetricRow {
  Metric metric;
  std::vector<ReportCell> cells;  // one per algorithm
};

/// Rows are metrics, columns algorithms; ranks are assigned within a row.
struct MetricReport {
  std::vector<std::string> algorithms;
  std::vector<MetricRow> rows;
  std::optional<Scenario> scenario;
  std::map<std::string, std::string> notes;
};

/// Rows are methods (baselines included), columns scenario splits; ranks
/// are assigned within a column.
struct DetectionReport {
  std::vector<std::string> methods;
  std::vector<std::string> splits;
  /// values[method][split]; nullopt where a split has no images.
  std::vector<std::vector<std::optional<double>>> values;
  std::vector<std::vector<int>> ranks;
  std::vector<std::vector<bool>> ties;
  std::map<std::string, std::string> notes;
};

struct RankResult {
  std::vector<int> ranks;
  std::vector<bool> ties;
};

/// Ranks present values by direction; equal values are ordered by name and
/// flagged as ties. Absent values get rank 0.
inline RankResult rank_values(const std::vector<std::optional<double>>& values,
                              const std::vector<std::string>& names, bool higher_better) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i]) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (*values[a] != *values[b]) {
      return higher_better ? *values[a] > *values[b] : *values[a] < *values[b];
    }
    return names[a] < names[b];
  });
  RankResult r{std::vector<int>(values.size(), 0), std::vector<bool>(values.size(), false)};
  for (std::size_t k = 0; k < order.size(); ++k) {
    r.ranks[order[k]] = static_cast<int>(k) + 1;
    if ((k > 0 && *values[order[k - 1]] == *values[order[k]]) ||
        (k + 1 < order.size() && *values[order[k + 1]] == *values[order[k]])) {
      r.ties[order[k]] = true;
    }
  }
  return r;
}

struct AggregateOptions {
  std::optional<Scenario> scenario;
  /// Render cells without records as empty instead of raising EmptyCell.
  bool allow_empty = false;
};

/// Mean and population standard deviation per (metric, algorithm). Rows
/// follow the canonical metric order, columns the order algorithms first
/// appear in `records`.
inline MetricReport aggregate(std::span<const MetricRecord> records,
                              const AggregateOptions& options = {}) {
  MetricReport report;
  report.scenario = options.scenario;
  std::vector<Metric> metrics;
  std::map<std::pair<Metric, std::string>, std::vector<double>> cells;
  for (const auto& r : records) {
    if (options.scenario && r.scenario != *options.scenario) continue;
    if (std::find(report.algorithms.begin(), report.algorithms.end(), r.algorithm) ==
        report.algorithms.end()) {
      report.algorithms.push_back(r.algorithm);
    }
    if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end()) {
      metrics.push_back(r.metric);
    }
    cells[{r.metric, r.algorithm}].push_back(r.value);
  }
  std::sort(metrics.begin(), metrics.end());

  for (Metric m : metrics) {
    MetricRow row{m, {}};
    std::vector<std::optional<double>> means;
    for (const auto& algo : report.algorithms) {
      ReportCell cell;
      auto it = cells.find({m, algo});
      if (it == cells.end()) {
        if (!options.allow_empty) {
          throw Error(ErrorCode::EmptyCell, "no " + std::string(to_string(m)) +
                                                " records for algorithm " + algo);
        }
        cell.empty = true;
        means.push_back(std::nullopt);
      } else {
        const auto& v = it->second;
        cell.count = v.size();
        cell.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0;
        for (double x : v) ss += (x - cell.mean) * (x - cell.mean);
        cell.std = std::sqrt(ss / static_cast<double>(v.size()));
        means.push_back(cell.mean);
      }
      row.cells.push_back(cell);
    }
    const auto ranked = rank_values(means, report.algorithms, higher_is_better(m));
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      row.cells[i].rank = ranked.ranks[i];
      row.cells[i].tie = ranked.ties[i];
    }
    report.rows.push_back(std::move(row));
  }
  report.notes["statistics"] = "mean +/- population standard deviation (1/N) per cell";
  report.notes["ranking"] = "best and second best per row; ties ordered by algorithm name";
  return report;
}

inline DetectionReport make_detection_report(std::vector<std::string> methods,
                                             std::vector<std::string> splits,
                                             std::vector<std::vector<std::optional<double>>> values) {
  DetectionReport r;
  r.methods = std::move(methods);
  r.splits = std::move(splits);
  r.values = std::move(values);
  r.ranks.assign(r.methods.size(), std::vector<int>(r.splits.size(), 0));
  r.ties.assign(r.methods.size(), std::vector<bool>(r.splits.size(), false));
  for (std::size_t s = 0; s < r.splits.size(); ++s) {
    std::vector<std::optional<double>> column;
    for (std::size_t m = 0; m < r.methods.size(); ++m) column.push_back(r.values[m][s]);
    const auto ranked = rank_values(column, r.methods, true);
    for (std::size_t m = 0; m < r.methods.size(); ++m) {
      r.ranks[m][s] = ranked.ranks[m];
      r.ties[m][s] = ranked.ties[m];
    }
  }
  r.notes["ranking"] = "best and second best per column; ties ordered by method name";
  return r;
}

}  // namespace fusionbench
