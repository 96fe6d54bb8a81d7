#pragma once

// YOLO text annotations: one object per line, "class cx cy w h", with the
// box centre and size normalized to [0, 1] by the image dimensions.

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/manifest.hpp"
#include "fusionbench/detection/box.hpp"

namespace fusionbench {

struct GroundTruthBox {
  int class_id = 0;
  BoundingBox box;
  friend bool operator==(const GroundTruthBox&, const GroundTruthBox&) = default;
};

namespace detail {
// LabelImg writes six decimals, so corners can overshoot the frame by
// rounding; anything beyond this slack is rejected.
inline constexpr double kYoloSlack = 1e-6;
}

inline std::vector<GroundTruthBox> parse_yolo_text(std::string_view text, int image_width,
                                                   int image_height,
                                                   std::string_view source = "<text>") {
  std::vector<GroundTruthBox> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto where = [&] { return std::string(source) + ":" + std::to_string(line_no); };
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.size() != 5) {
      throw Error(ErrorCode::MalformedLine,
                  where() + ": expected 'class cx cy w h', got " + std::to_string(tok.size()) +
                      " fields");
    }
    double v[5];
    for (int i = 0; i < 5; ++i) {
      try {
        std::size_t used = 0;
        v[i] = std::stod(tok[i], &used);
        if (used != tok[i].size() || !std::isfinite(v[i])) throw std::invalid_argument(tok[i]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedLine, where() + ": '" + tok[i] + "' is not a number");
      }
    }
    if (v[0] < 0 || v[0] != std::floor(v[0])) {
      throw Error(ErrorCode::MalformedLine, where() + ": class id must be a non-negative integer");
    }
    for (int i = 1; i < 5; ++i) {
      if (v[i] < 0.0 || v[i] > 1.0) {
        throw Error(ErrorCode::OutOfRangeValue,
                    where() + ": value " + tok[i] + " outside [0, 1]");
      }
    }
    const double cx = v[1], cy = v[2], w = v[3], h = v[4];
    if (w <= 0.0 || h <= 0.0) {
      throw Error(ErrorCode::OutOfRangeValue, where() + ": zero-sized box");
    }
    double x0 = cx - w / 2, x1 = cx + w / 2, y0 = cy - h / 2, y1 = cy + h / 2;
    if (x0 < -detail::kYoloSlack || y0 < -detail::kYoloSlack || x1 > 1 + detail::kYoloSlack ||
        y1 > 1 + detail::kYoloSlack) {
      throw Error(ErrorCode::OutOfRangeValue, where() + ": box extends outside the image");
    }
    x0 = std::max(0.0, x0) * image_width;
    x1 = std::min(1.0, x1) * image_width;
    y0 = std::max(0.0, y0) * image_height;
    y1 = std::min(1.0, y1) * image_height;
    out.push_back({static_cast<int>(v[0]), BoundingBox::checked(x0, y0, x1, y1)});
  }
  return out;
}

inline std::vector<GroundTruthBox> parse_yolo_annotations(const std::filesystem::path& path,
                                                          int image_width, int image_height) {
  return parse_yolo_text(read_text_file(path), image_width, image_height, path.string());
}

inline std::string format_yolo(const std::vector<GroundTruthBox>& boxes, int image_width,
                               int image_height) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  for (const auto& g : boxes) {
    const double cx = (g.box.x_min + g.box.x_max) / 2.0 / image_width;
    const double cy = (g.box.y_min + g.box.y_max) / 2.0 / image_height;
    out << g.class_id << ' ' << cx << ' ' << cy << ' ' << g.box.width() / image_width << ' '
        << g.box.height() / image_height << '\n';
  }
  return out.str();
}

}  // namespace fusionbench
