#pragma once

// Greedy IoU matching, all-point interpolated AP, and pooled mAP across
// images for the single pedestrian class.

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fusionbench/core/manifest.hpp"
#include "fusionbench/detection/box.hpp"

namespace fusionbench {

struct ScoredBox {
  double score = 0;
  BoundingBox box;
};

struct LabeledDetection {
  double score = 0;
  bool true_positive = false;
  std::size_t detection_index = 0;
  std::optional<std::size_t> ground_truth_index;
};

/// Indices of `dets` by descending score; equal scores keep input order.
inline std::vector<std::size_t> score_order(std::span<const ScoredBox> dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
  return order;
}

/// Visits detections by descending score; each claims the still-unmatched
/// ground truth with the highest IoU >= threshold (lowest index on ties) or
/// becomes a false positive. Result is in visiting order.
inline std::vector<LabeledDetection> match_detections(std::span<const ScoredBox> dets,
                                                      std::span<const BoundingBox> gts,
                                                      double iou_threshold) {
  std::vector<bool> taken(gts.size(), false);
  std::vector<LabeledDetection> out;
  out.reserve(dets.size());
  for (std::size_t di : score_order(dets)) {
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(dets[di].box, gts[g]);
      if (v >= iou_threshold && v > best_iou) {
        best_iou = v;
        best = g;
      }
    }
    if (best) taken[*best] = true;
    out.push_back({dets[di].score, best.has_value(), di, best});
  }
  return out;
}

struct PrPoint {
  double recall;
  double precision;
};

struct PrCurve {
  std::vector<PrPoint> points;
  double ap = 0.0;
  /// Set when there was no ground truth; AP is then defined as 0.
  bool no_ground_truth = false;
};

/// Precision/recall accumulated in descending-score order (stable); AP is
/// the area under the monotone precision envelope, where precision at a
/// recall level is the max precision at any recall >= it.
inline PrCurve average_precision(std::span<const LabeledDetection> labels, std::size_t num_gt) {
  PrCurve curve;
  if (num_gt == 0) {
    curve.no_ground_truth = true;
    return curve;
  }
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return labels[a].score > labels[b].score;
  });
  std::size_t tp = 0;
  std::size_t seen = 0;
  curve.points.reserve(labels.size());
  for (std::size_t i : order) {
    ++seen;
    if (labels[i].true_positive) ++tp;
    curve.points.push_back({static_cast<double>(tp) / static_cast<double>(num_gt),
                            static_cast<double>(tp) / static_cast<double>(seen)});
  }
  std::vector<double> envelope(curve.points.size());
  double running = 0.0;
  for (std::size_t i = curve.points.size(); i-- > 0;) {
    running = std::max(running, curve.points[i].precision);
    envelope[i] = running;
  }
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    curve.ap += (curve.points[i].recall - prev_recall) * envelope[i];
    prev_recall = curve.points[i].recall;
  }
  return curve;
}

/// Detections and ground truth for one image of the evaluated class.
struct ImageRecord {
  std::string image_id;
  Scenario scenario = Scenario::Other;
  std::vector<ScoredBox> detections;
  std::vector<BoundingBox> ground_truth;
};

struct PooledLabels {
  std::vector<LabeledDetection> labels;
  std::size_t num_gt = 0;
  std::size_t num_images = 0;
};

/// Matches each image independently and concatenates the labels in image
/// order, for one global ranking.
inline PooledLabels pool_labels(std::span<const ImageRecord> records,
                                std::optional<Scenario> scenario, double iou_threshold) {
  PooledLabels pooled;
  for (const auto& r : records) {
    if (scenario && r.scenario != *scenario) continue;
    auto labels = match_detections(r.detections, r.ground_truth, iou_threshold);
    pooled.labels.insert(pooled.labels.end(), labels.begin(), labels.end());
    pooled.num_gt += r.ground_truth.size();
    ++pooled.num_images;
  }
  return pooled;
}

struct MapResult {
  double map = 0.0;
  PrCurve curve;
  std::size_t num_gt = 0;
  std::size_t num_images = 0;
  std::size_t num_detections = 0;
};

/// Pooled AP over all (filtered) images; with a single class this is mAP.
inline MapResult map_at_iou(std::span<const ImageRecord> records, std::optional<Scenario> scenario,
                            double iou_threshold) {
  const PooledLabels pooled = pool_labels(records, scenario, iou_threshold);
  MapResult r;
  r.curve = average_precision(pooled.labels, pooled.num_gt);
  r.map = r.curve.ap;
  r.num_gt = pooled.num_gt;
  r.num_images = pooled.num_images;
  r.num_detections = pooled.labels.size();
  return r;
}

inline MapResult map_at_50(std::span<const ImageRecord> records,
                           std::optional<Scenario> scenario = std::nullopt) {
  return map_at_iou(records, scenario, 0.5);
}

}  // namespace fusionbench
