#pragma once

// Detection interchange file written by the detector adapter:
//
//   {
//     "schema_version": "1.0",
//     "prompt": "a person",
//     "text_threshold": 0.3,
//     "iou_threshold": 0.5,
//     "threshold_mapping": "iou_threshold -> box_threshold",   (optional)
//     "images": {
//       "day_0001_vis": [ {"label": "a person", "score": 0.91,
//                          "box": [x_min, y_min, x_max, y_max]} ],
//       ...
//     }
//   }
//
// Image ids are manifest pair ids plus a modality suffix: "_vis", "_ir" or
// "_fused_<algorithm>". Boxes are absolute pixels. See
// docs/detections.schema.json.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/manifest.hpp"
#include "fusionbench/detection/average_precision.hpp"
#include "fusionbench/detection/box.hpp"
#include "fusionbench/detection/yolo.hpp"

namespace fusionbench {

inline constexpr const char* kDetectionSchemaMajor = "1";

struct Detection {
  std::string label;
  double score = 0;
  BoundingBox box;
};

struct DetectionExport {
  std::string schema_version = "1.0";
  std::string prompt = "a person";
  double text_threshold = 0.3;
  double iou_threshold = 0.5;
  std::optional<std::string> threshold_mapping;
  std::map<std::string, std::vector<Detection>> images;
};

/// Schema findings for a parsed JSON document, one message per problem.
inline std::vector<std::string> check_detection_json(const nlohmann::json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) return {"document root must be an object"};
  auto need = [&](const char* key, auto pred, const char* what) {
    if (!doc.contains(key)) {
      problems.push_back(std::string("missing '") + key + "'");
    } else if (!pred(doc.at(key))) {
      problems.push_back(std::string("'") + key + "' must be " + what);
    }
  };
  auto is_string = [](const nlohmann::json& j) { return j.is_string(); };
  auto is_unit = [](const nlohmann::json& j) {
    return j.is_number() && j.get<double>() >= 0.0 && j.get<double>() <= 1.0;
  };
  need("schema_version", is_string, "a string");
  need("prompt", is_string, "a string");
  need("text_threshold", is_unit, "a number in [0, 1]");
  need("iou_threshold", is_unit, "a number in [0, 1]");
  need("images", [](const nlohmann::json& j) { return j.is_object(); }, "an object");
  if (doc.contains("threshold_mapping") && !doc.at("threshold_mapping").is_string()) {
    problems.push_back("'threshold_mapping' must be a string");
  }
  if (doc.contains("schema_version") && doc.at("schema_version").is_string()) {
    const auto v = doc.at("schema_version").get<std::string>();
    if (v.substr(0, v.find('.')) != kDetectionSchemaMajor) {
      problems.push_back("unsupported schema_version '" + v + "'");
    }
  }
  if (!doc.contains("images") || !doc.at("images").is_object()) return problems;

  for (const auto& [id, list] : doc.at("images").items()) {
    if (!list.is_array()) {
      problems.push_back("images['" + id + "'] must be an array");
      continue;
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& d = list[i];
      const std::string at = "images['" + id + "'][" + std::to_string(i) + "]";
      if (!d.is_object()) {
        problems.push_back(at + " must be an object");
        continue;
      }
      if (!d.contains("label") || !d.at("label").is_string()) {
        problems.push_back(at + ".label must be a string");
      }
      if (!d.contains("score") || !is_unit(d.at("score"))) {
        problems.push_back(at + ".score must be a number in [0, 1]");
      }
      const bool box_ok = d.contains("box") && d.at("box").is_array() &&
                          d.at("box").size() == 4 &&
                          std::all_of(d.at("box").begin(), d.at("box").end(),
                                      [](const nlohmann::json& v) { return v.is_number(); });
      if (!box_ok) {
        problems.push_back(at + ".box must be [x_min, y_min, x_max, y_max]");
      } else {
        const auto& b = d.at("box");
        if (!(b[0].get<double>() < b[2].get<double>()) ||
            !(b[1].get<double>() < b[3].get<double>())) {
          problems.push_back(at + ".box requires x_min < x_max and y_min < y_max");
        }
      }
    }
  }
  return problems;
}

inline DetectionExport parse_detection_json(const nlohmann::json& doc,
                                            const std::string& source = "<json>") {
  const auto problems = check_detection_json(doc);
  if (!problems.empty()) throw Error(ErrorCode::SchemaViolation, source + ": " + problems.front());
  DetectionExport e;
  e.schema_version = doc.at("schema_version").get<std::string>();
  e.prompt = doc.at("prompt").get<std::string>();
  e.text_threshold = doc.at("text_threshold").get<double>();
  e.iou_threshold = doc.at("iou_threshold").get<double>();
  if (doc.contains("threshold_mapping")) {
    e.threshold_mapping = doc.at("threshold_mapping").get<std::string>();
  }
  for (const auto& [id, list] : doc.at("images").items()) {
    auto& dets = e.images[id];
    for (const auto& d : list) {
      const auto& b = d.at("box");
      dets.push_back({d.at("label").get<std::string>(), d.at("score").get<double>(),
                      BoundingBox{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                                  b[3].get<double>()}});
    }
  }
  return e;
}

inline nlohmann::json parse_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw Error(ErrorCode::SchemaViolation, path.string() + ": " + ex.what());
  }
}

inline DetectionExport load_detection_export(const std::filesystem::path& path) {
  return parse_detection_json(parse_json_file(path), path.string());
}

inline nlohmann::json to_json(const DetectionExport& e) {
  nlohmann::json images = nlohmann::json::object();
  for (const auto& [id, dets] : e.images) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& d : dets) {
      list.push_back({{"label", d.label},
                      {"score", d.score},
                      {"box", {d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max}}});
    }
    images[id] = std::move(list);
  }
  nlohmann::json doc = {{"schema_version", e.schema_version},
                        {"prompt", e.prompt},
                        {"text_threshold", e.text_threshold},
                        {"iou_threshold", e.iou_threshold},
                        {"images", std::move(images)}};
  if (e.threshold_mapping) doc["threshold_mapping"] = *e.threshold_mapping;
  return doc;
}

/// Merges per-modality exports. An image id present in two files is a
/// SchemaViolation.
inline std::map<std::string, std::vector<Detection>> merge_exports(
    const std::vector<DetectionExport>& exports) {
  std::map<std::string, std::vector<Detection>> merged;
  for (const auto& e : exports) {
    for (const auto& [id, dets] : e.images) {
      if (!merged.emplace(id, dets).second) {
        throw Error(ErrorCode::SchemaViolation, "image id '" + id + "' appears in two exports");
      }
    }
  }
  return merged;
}

inline std::string modality_suffix_visible() { return "_vis"; }
inline std::string modality_suffix_infrared() { return "_ir"; }
inline std::string modality_suffix_fused(std::string_view algorithm) {
  return "_fused_" + std::string(algorithm);
}

/// Annotated image with its (already denormalized) ground truth.
struct AnnotatedImage {
  std::string pair_id;
  Scenario scenario = Scenario::Other;
  std::vector<GroundTruthBox> ground_truth;
};

/// Detector labels counted as the evaluated class, and that class's id in
/// the annotations.
struct ClassMapping {
  std::set<std::string> labels = {"a person", "person"};
  int class_id = 0;
};

/// Builds per-image records for one modality (`suffix`). Every annotated
/// image must have an entry (possibly empty) in `detections`, otherwise
/// MissingImageEntry.
inline std::vector<ImageRecord> join_records(
    const std::vector<AnnotatedImage>& annotated,
    const std::map<std::string, std::vector<Detection>>& detections, std::string_view suffix,
    const ClassMapping& classes = {}) {
  std::vector<ImageRecord> records;
  records.reserve(annotated.size());
  for (const auto& img : annotated) {
    const std::string id = img.pair_id + std::string(suffix);
    auto it = detections.find(id);
    if (it == detections.end()) {
      throw Error(ErrorCode::MissingImageEntry, "no detections entry for image '" + id + "'");
    }
    ImageRecord r;
    r.image_id = id;
    r.scenario = img.scenario;
    for (const auto& g : img.ground_truth) {
      if (g.class_id == classes.class_id) r.ground_truth.push_back(g.box);
    }
    for (const auto& d : it->second) {
      if (classes.labels.count(d.label)) r.detections.push_back({d.score, d.box});
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace fusionbench
