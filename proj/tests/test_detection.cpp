#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "fusionbench/detection/average_precision.hpp"
#include "fusionbench/detection/box.hpp"
#include "fusionbench/detection/detections_json.hpp"
#include "fusionbench/detection/yolo.hpp"

#include "oracles.hpp"
#include "toy_detection.hpp"

using namespace fusionbench;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvariantViolation;
}

BoundingBox random_box(std::mt19937& rng, double extent) {
  std::uniform_real_distribution<double> pos(0, extent), size(1, extent / 2);
  const double x = pos(rng), y = pos(rng);
  return {x, y, x + size(rng), y + size(rng)};
}

oracle::Box to_oracle(const BoundingBox& b) { return {b.x_min, b.y_min, b.x_max, b.y_max}; }

}  // namespace

TEST(Yolo, DenormalizesExamples) {
  auto full = parse_yolo_text("0 0.5 0.5 1.0 1.0\n", 640, 512);
  ASSERT_EQ(full.size(), 1u);
  EXPECT_EQ(full[0].box, (BoundingBox{0, 0, 640, 512}));
  auto quarter = parse_yolo_text("0 0.25 0.25 0.5 0.5", 640, 512);
  EXPECT_EQ(quarter[0].box, (BoundingBox{0, 0, 320, 256}));
  EXPECT_EQ(quarter[0].class_id, 0);
}

TEST(Yolo, RejectsBadLines) {
  EXPECT_EQ(code_of([] { parse_yolo_text("0 1.5 0.5 0.2 0.2", 640, 512); }),
            ErrorCode::OutOfRangeValue);
  EXPECT_EQ(code_of([] { parse_yolo_text("0 0.95 0.5 0.2 0.2", 640, 512); }),
            ErrorCode::OutOfRangeValue);
  EXPECT_EQ(code_of([] { parse_yolo_text("0 0.5 0.5 0.2", 640, 512); }), ErrorCode::MalformedLine);
  EXPECT_EQ(code_of([] { parse_yolo_text("person 0.5 0.5 0.2 0.2", 640, 512); }),
            ErrorCode::MalformedLine);
  EXPECT_EQ(code_of([] { parse_yolo_text("0.5 0.5 0.5 0.2 0.2", 640, 512); }),
            ErrorCode::MalformedLine);
  EXPECT_TRUE(parse_yolo_text("\n  \n", 10, 10).empty());
}

TEST(Yolo, FormatRoundTripsWithinRounding) {
  const std::vector<GroundTruthBox> boxes = {{0, {10, 20, 74, 148}}, {1, {0, 0, 640, 512}}};
  const auto again = parse_yolo_text(format_yolo(boxes, 640, 512), 640, 512);
  ASSERT_EQ(again.size(), 2u);
  EXPECT_NEAR(again[0].box.x_min, 10, 1e-3);
  EXPECT_NEAR(again[0].box.y_max, 148, 1e-3);
  EXPECT_EQ(again[1].class_id, 1);
}

TEST(Iou, Examples) {
  const BoundingBox a{0, 0, 2, 2}, b{1, 0, 3, 2};
  EXPECT_DOUBLE_EQ(iou(a, b), 1.0 / 3.0);
  EXPECT_EQ(iou(a, a), 1.0);
  EXPECT_EQ(iou(a, {5, 5, 6, 6}), 0.0);
  EXPECT_EQ(iou(a, {2, 0, 4, 2}), 0.0);
}

TEST(Iou, SymmetricAndBounded) {
  std::mt19937 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_box(rng, 20), b = random_box(rng, 20);
    EXPECT_EQ(iou(a, b), iou(b, a));
    EXPECT_GE(iou(a, b), 0.0);
    EXPECT_LE(iou(a, b), 1.0);
    EXPECT_NEAR(iou(a, b), oracle::iou(to_oracle(a), to_oracle(b)), 1e-12);
  }
  EXPECT_EQ(code_of([] { BoundingBox::checked(1, 0, 1, 2); }), ErrorCode::OutOfRangeValue);
}

TEST(Matching, SingleMatchRule) {
  const std::vector<BoundingBox> gt = {{0, 0, 10, 10}};
  const std::vector<ScoredBox> one = {{0.4, {0, 0, 10, 6}}};
  auto l = match_detections(one, gt, 0.5);
  ASSERT_EQ(l.size(), 1u);
  EXPECT_TRUE(l[0].true_positive);

  const std::vector<ScoredBox> two = {{0.3, {0, 0, 10, 9}}, {0.8, {0, 0, 10, 8}}};
  l = match_detections(two, gt, 0.5);
  EXPECT_EQ(l[0].detection_index, 1u);
  EXPECT_TRUE(l[0].true_positive);
  EXPECT_FALSE(l[1].true_positive);
}

TEST(Matching, TiesKeepInputOrder) {
  const std::vector<BoundingBox> gt = {{0, 0, 10, 10}};
  const std::vector<ScoredBox> dets = {{0.5, {0, 0, 10, 10}}, {0.5, {0, 0, 10, 10}}};
  const auto l = match_detections(dets, gt, 0.5);
  EXPECT_EQ(l[0].detection_index, 0u);
  EXPECT_TRUE(l[0].true_positive);
}

TEST(Matching, AgreesWithExhaustiveAssignmentOracle) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> score(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<BoundingBox> gts;
    std::vector<ScoredBox> dets;
    for (int i = 0; i < 3; ++i) gts.push_back(random_box(rng, 8));
    for (int i = 0; i < 3; ++i) {
      // Detections near a ground truth so that matches are common.
      const auto& g = gts[rng() % 3];
      std::uniform_real_distribution<double> j(-1.5, 1.5);
      dets.push_back({score(rng), {g.x_min + j(rng), g.y_min + j(rng), g.x_max + j(rng) + 3,
                                   g.y_max + j(rng) + 3}});
    }
    std::vector<int> order(3);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return dets[a].score > dets[b].score; });
    std::vector<oracle::Box> od, og;
    for (const auto& d : dets) od.push_back(to_oracle(d.box));
    for (const auto& g : gts) og.push_back(to_oracle(g));
    const auto survivors = oracle::greedy_consistent_assignments(od, og, order, 0.3);
    ASSERT_EQ(survivors.size(), 1u);

    const auto labels = match_detections(dets, gts, 0.3);
    std::vector<int> used;
    for (const auto& l : labels) {
      const int expect = survivors[0][l.detection_index];
      EXPECT_EQ(l.true_positive, expect >= 0);
      if (l.ground_truth_index) {
        EXPECT_EQ(static_cast<int>(*l.ground_truth_index), expect);
        used.push_back(expect);
      }
    }
    std::sort(used.begin(), used.end());
    EXPECT_EQ(std::adjacent_find(used.begin(), used.end()), used.end());
  }
}

TEST(AveragePrecision, SmallExamples) {
  std::vector<LabeledDetection> tp = {{0.9, true, 0, 0}};
  EXPECT_EQ(average_precision(tp, 1).ap, 1.0);
  std::vector<LabeledDetection> fp = {{0.9, false, 0, std::nullopt}};
  EXPECT_EQ(average_precision(fp, 1).ap, 0.0);
  std::vector<LabeledDetection> mix = {
      {0.9, true, 0, 0}, {0.8, false, 1, std::nullopt}, {0.7, true, 2, 1}};
  EXPECT_NEAR(average_precision(mix, 2).ap, 0.5 + 0.5 * 2.0 / 3.0, 1e-12);
}

TEST(AveragePrecision, NoGroundTruthIsFlagged) {
  const auto c = average_precision({}, 0);
  EXPECT_EQ(c.ap, 0.0);
  EXPECT_TRUE(c.no_ground_truth);
}

TEST(AveragePrecision, RecallNonDecreasing) {
  std::mt19937 rng(3);
  std::vector<LabeledDetection> labels;
  for (int i = 0; i < 50; ++i) labels.push_back({(rng() % 1000) / 1000.0, rng() % 2 == 0, 0, {}});
  const auto c = average_precision(labels, 40);
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    EXPECT_GE(c.points[i].recall, c.points[i - 1].recall);
  }
}

TEST(Map, ToyFiveImageInstance) {
  const auto recs = toy::five_images();
  EXPECT_NEAR(map_at_50(recs).map, toy::kApAll, 1e-9);
  EXPECT_NEAR(map_at_50(recs, Scenario::Daytime).map, toy::kApDay, 1e-9);
  EXPECT_NEAR(map_at_50(recs, Scenario::Nighttime).map, toy::kApNight, 1e-9);
  EXPECT_EQ(map_at_50(recs).num_gt, 5u);
  EXPECT_NEAR(map_at_50(toy::envelope_example()).map, toy::kEnvelopeAp, 1e-9);
}

TEST(Map, PerfectAndEmptyDetectors) {
  std::mt19937 rng(4);
  std::vector<ImageRecord> perfect, empty;
  for (int i = 0; i < 6; ++i) {
    ImageRecord r{"i" + std::to_string(i), Scenario::Daytime, {}, {}};
    for (int k = 0; k < 3; ++k) {
      const BoundingBox b{k * 20.0, 0, k * 20.0 + 10, 10};
      r.ground_truth.push_back(b);
      r.detections.push_back({(rng() % 100) / 100.0, b});
    }
    perfect.push_back(r);
    r.detections.clear();
    empty.push_back(r);
  }
  EXPECT_EQ(map_at_50(perfect).map, 1.0);
  EXPECT_EQ(map_at_50(empty).map, 0.0);
}

TEST(Map, AddingLowestScoredZeroIouFalsePositiveNeverHelps) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto recs = toy::five_images();
    for (auto& r : recs)
      for (auto& d : r.detections) d.score = 0.1 + 0.8 * (rng() % 1000) / 1000.0;
    const double before = map_at_50(recs).map;
    recs[rng() % recs.size()].detections.push_back({0.01, {900, 900, 910, 910}});
    EXPECT_LE(map_at_50(recs).map, before);
  }
}

TEST(Map, MatchesPooledOracle) {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> score(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<ImageRecord> recs;
    for (int i = 0; i < 5; ++i) {
      ImageRecord r{"t" + std::to_string(i), i % 2 ? Scenario::Nighttime : Scenario::Daytime, {}, {}};
      const int num_gts = static_cast<int>(rng() % 4), num_dets = static_cast<int>(rng() % 5);
      for (int g = 0; g < num_gts; ++g) r.ground_truth.push_back(random_box(rng, 30));
      for (int d = 0; d < num_dets; ++d) {
        const BoundingBox b = !r.ground_truth.empty() && rng() % 2
                                  ? r.ground_truth[rng() % r.ground_truth.size()]
                                  : random_box(rng, 30);
        r.detections.push_back({score(rng), b});
      }
      recs.push_back(r);
    }
    std::vector<std::pair<double, bool>> scored;
    int num_gt = 0;
    for (const auto& r : recs) {
      num_gt += static_cast<int>(r.ground_truth.size());
      for (const auto& l : match_detections(r.detections, r.ground_truth, 0.5)) {
        scored.push_back({l.score, l.true_positive});
      }
    }
    EXPECT_NEAR(map_at_50(recs).map, oracle::pooled_ap(scored, num_gt), 1e-12);
  }
}

TEST(DetectionJson, SchemaCheckAndRoundTrip) {
  DetectionExport e;
  e.threshold_mapping = "iou_threshold -> box_threshold";
  e.images["a_vis"] = {{"a person", 0.75, {1, 2, 3, 4}}};
  e.images["a_ir"] = {};
  const auto doc = to_json(e);
  EXPECT_TRUE(check_detection_json(doc).empty());
  const auto back = parse_detection_json(doc);
  EXPECT_EQ(back.images.at("a_vis")[0].box, (BoundingBox{1, 2, 3, 4}));
  EXPECT_EQ(back.text_threshold, 0.3);
  EXPECT_EQ(back.iou_threshold, 0.5);
  EXPECT_EQ(back.threshold_mapping, e.threshold_mapping);

  auto bad = doc;
  bad["images"]["a_vis"][0]["score"] = 1.5;
  bad["images"]["a_vis"][0]["box"] = {3, 2, 1, 4};
  bad.erase("prompt");
  EXPECT_EQ(check_detection_json(bad).size(), 3u);
  EXPECT_EQ(code_of([&] { parse_detection_json(bad); }), ErrorCode::SchemaViolation);
  auto v2 = doc;
  v2["schema_version"] = "2.0";
  EXPECT_EQ(check_detection_json(v2).size(), 1u);
}

TEST(DetectionJson, JoinRequiresEveryAnnotatedImage) {
  std::map<std::string, std::vector<Detection>> dets;
  dets["p1_ir"] = {{"person", 0.9, {0, 0, 5, 5}}, {"car", 0.95, {0, 0, 5, 5}}};
  const std::vector<AnnotatedImage> gt = {
      {"p1", Scenario::Daytime, {{0, {0, 0, 5, 5}}, {1, {9, 9, 12, 12}}}},
      {"p2", Scenario::Nighttime, {}}};
  EXPECT_EQ(code_of([&] { join_records(gt, dets, "_ir"); }), ErrorCode::MissingImageEntry);
  dets["p2_ir"] = {};
  const auto recs = join_records(gt, dets, "_ir");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].detections.size(), 1u);   // the "car" label is not the person class
  EXPECT_EQ(recs[0].ground_truth.size(), 1u); // class 1 is ignored
  EXPECT_EQ(map_at_50(recs).map, 1.0);
}

TEST(DetectionJson, MergeRejectsDuplicateIds) {
  DetectionExport a, b;
  a.images["x_vis"] = {};
  b.images["x_vis"] = {};
  EXPECT_EQ(code_of([&] { merge_exports({a, b}); }), ErrorCode::SchemaViolation);
}

TEST(Map, InvariantUnderMonotoneScoreRescaling) {
  const auto base = toy::five_images();
  const double ap = map_at_50(base).map;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> k(0.1, 5.0), shift(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = k(rng), b = shift(rng), p = k(rng);
    auto recs = base;
    for (auto& r : recs)
      for (auto& d : r.detections) d.score = a * std::pow(d.score, p) + b;
    EXPECT_EQ(map_at_50(recs).map, ap);
  }
}

TEST(Map, UnfilteredEqualsMergedDayAndNight) {
  const auto recs = toy::five_images();
  std::vector<ImageRecord> merged;
  for (auto s : {Scenario::Daytime, Scenario::Nighttime})
    for (const auto& r : recs)
      if (r.scenario == s) merged.push_back(r);
  EXPECT_EQ(map_at_50(recs).map, map_at_iou(merged, std::nullopt, 0.5).map);
}
