// Writes the small synthetic dataset under data/mini: six aligned 64x48
// pairs (three day, three night) with YOLO labels, three simple fused
// outputs per pair and fake detector exports for every modality.
//
//   make_mini_dataset <out_dir>
//
// Randomness comes straight from std::mt19937 output so the files are the
// same on every standard library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "fusionbench/core/image.hpp"
#include "fusionbench/core/image_io.hpp"
#include "fusionbench/core/manifest.hpp"
#include "fusionbench/detection/detections_json.hpp"
#include "fusionbench/detection/yolo.hpp"

namespace fs = std::filesystem;
using namespace fusionbench;

namespace {

constexpr int kWidth = 64;
constexpr int kHeight = 48;

struct Rng {
  std::mt19937 gen;
  explicit Rng(std::uint32_t seed) : gen(seed) {}
  double unit() { return static_cast<double>(gen()) / 4294967296.0; }
  int range(int lo, int hi) { return lo + static_cast<int>(gen() % static_cast<std::uint32_t>(hi - lo + 1)); }
};

std::uint8_t clamp8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

struct Scene {
  std::string id;
  Scenario scenario;
  std::vector<BoundingBox> people;
  ColorImage visible{kWidth, kHeight};
  GrayImage infrared{kWidth, kHeight};
};

Scene make_scene(const std::string& id, Scenario sc, Rng& rng) {
  Scene s{id, sc, {}};
  const bool day = sc == Scenario::Daytime;
  const int people = rng.range(1, 3);
  for (int i = 0; i < people; ++i) {
    const int w = rng.range(6, 10);
    const int h = rng.range(14, 22);
    const int x = rng.range(2 + i * 20, 10 + i * 20);
    const int y = rng.range(4, kHeight - h - 2);
    s.people.push_back({static_cast<double>(x), static_cast<double>(y),
                        static_cast<double>(std::min(x + w, kWidth)),
                        static_cast<double>(y + h)});
  }
  auto inside = [&](int x, int y) {
    for (const auto& b : s.people)
      if (x >= b.x_min && x < b.x_max && y >= b.y_min && y < b.y_max) return true;
    return false;
  };
  const double base = day ? 150.0 : 35.0;
  for (int y = 0; y < kHeight; ++y) {
    for (int x = 0; x < kWidth; ++x) {
      const double texture = 25.0 * std::sin(0.35 * x + 0.2 * y) + 18.0 * (rng.unit() - 0.5);
      const double shade = base + 0.6 * (y - kHeight / 2) + texture;
      const bool person = inside(x, y);
      const double vis = person ? (day ? shade - 60.0 : shade + 12.0) : shade;
      s.visible.at(x, y, 0) = clamp8(vis + (day ? 10.0 : 0.0));
      s.visible.at(x, y, 1) = clamp8(vis);
      s.visible.at(x, y, 2) = clamp8(vis - (day ? 15.0 : 5.0));
      const double heat = person ? 215.0 + 20.0 * rng.unit() : 60.0 + 0.5 * x + 10.0 * rng.unit();
      s.infrared.at(x, y) = clamp8(heat);
    }
  }
  return s;
}

GrayImage fuse(const Scene& s, const std::string& algo) {
  const GrayImage vis = to_grayscale(s.visible);
  GrayImage out(kWidth, kHeight);
  for (int y = 0; y < kHeight; ++y) {
    for (int x = 0; x < kWidth; ++x) {
      const int a = vis.at(x, y);
      const int b = s.infrared.at(x, y);
      int v = 0;
      if (algo == "Average") v = (a + b + 1) / 2;
      if (algo == "MaxSelect") v = std::max(a, b);
      if (algo == "IRWeighted") v = static_cast<int>(std::lround(0.3 * a + 0.7 * b));
      out.at(x, y) = static_cast<std::uint8_t>(v);
    }
  }
  return out;
}

/// Jittered copies of the ground truth plus clutter. `quality` in [0, 1]
/// controls how often people are found and how well false alarms score.
std::vector<Detection> fake_detections(const Scene& s, double quality, Rng& rng) {
  std::vector<Detection> out;
  for (const auto& b : s.people) {
    if (rng.unit() > 0.35 + 0.6 * quality) continue;
    const double j = 2.5 * (1.0 - quality);
    const double dx = j * (rng.unit() - 0.5), dy = j * (rng.unit() - 0.5);
    out.push_back({"person", 0.45 + 0.5 * quality * rng.unit() + 0.04,
                   {std::max(0.0, b.x_min + dx), std::max(0.0, b.y_min + dy),
                    std::min<double>(kWidth, b.x_max + dx), std::min<double>(kHeight, b.y_max + dy)}});
  }
  const int clutter = rng.range(0, 2);
  for (int i = 0; i < clutter; ++i) {
    const double x = rng.range(0, kWidth - 10), y = rng.range(0, kHeight - 16);
    out.push_back({"person", 0.3 + 0.6 * (1.0 - quality) * rng.unit(), {x, y, x + 8, y + 15}});
  }
  out.push_back({"car", 0.99, {1, 1, 12, 8}});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_mini_dataset <out_dir>\n";
    return 1;
  }
  const fs::path root(argv[1]);
  const std::vector<std::string> algos = {"Average", "MaxSelect", "IRWeighted"};
  try {
    Rng rng(20240607u);
    DatasetManifest m;
    m.name = "mini-synthetic";
    m.base_dir = root;
    for (const auto& a : algos) m.fused_dirs.emplace_back(a, "fused/" + a);

    std::vector<Scene> scenes;
    for (int i = 1; i <= 3; ++i) scenes.push_back(make_scene("day_0" + std::to_string(i), Scenario::Daytime, rng));
    for (int i = 1; i <= 3; ++i) scenes.push_back(make_scene("night_0" + std::to_string(i), Scenario::Nighttime, rng));

    fs::create_directories(root / "labels");
    fs::create_directories(root / "detections");
    DetectionExport vis_export, ir_export, fused_export;
    for (auto* e : {&vis_export, &ir_export, &fused_export}) e->prompt = "person";
    vis_export.threshold_mapping = ir_export.threshold_mapping = fused_export.threshold_mapping =
        "iou_threshold -> box_threshold";

    for (const auto& s : scenes) {
      save_png(s.visible, root / "visible" / (s.id + ".png"));
      save_png(s.infrared, root / "infrared" / (s.id + ".png"));
      std::vector<GroundTruthBox> gt;
      for (const auto& b : s.people) gt.push_back({0, b});
      std::ofstream(root / "labels" / (s.id + ".txt")) << format_yolo(gt, kWidth, kHeight);
      m.entries.push_back({s.id, s.scenario, "visible/" + s.id + ".png",
                           "infrared/" + s.id + ".png", "labels/" + s.id + ".txt", true, true});

      const bool day = s.scenario == Scenario::Daytime;
      vis_export.images[s.id + modality_suffix_visible()] =
          fake_detections(s, day ? 0.8 : 0.3, rng);
      ir_export.images[s.id + modality_suffix_infrared()] = fake_detections(s, 0.7, rng);
      for (std::size_t k = 0; k < algos.size(); ++k) {
        save_png(fuse(s, algos[k]), root / "fused" / algos[k] / (s.id + ".png"));
        fused_export.images[s.id + modality_suffix_fused(algos[k])] =
            fake_detections(s, 0.55 + 0.15 * static_cast<double>(k), rng);
      }
    }
    std::ofstream(root / "manifest.txt") << serialize_manifest(m);
    std::ofstream(root / "detections" / "visible.json") << to_json(vis_export).dump(1) << "\n";
    std::ofstream(root / "detections" / "infrared.json") << to_json(ir_export).dump(1) << "\n";
    std::ofstream(root / "detections" / "fused.json") << to_json(fused_export).dump(1) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "make_mini_dataset: " << e.what() << "\n";
    return 2;
  }
  std::cout << "wrote " << root.string() << "\n";
  return 0;
}
