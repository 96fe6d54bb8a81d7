#pragma once

#include <algorithm>
#include <string>

#include "fusionbench/core/error.hpp"

namespace fusionbench {

/// Axis-aligned box in absolute pixel coordinates; x_min < x_max and
/// y_min < y_max.
struct BoundingBox {
  double x_min = 0;
  double y_min = 0;
  double x_max = 0;
  double y_max = 0;

  static BoundingBox checked(double x0, double y0, double x1, double y1) {
    if (!(x0 < x1) || !(y0 < y1)) {
      throw Error(ErrorCode::OutOfRangeValue,
                  "degenerate box (" + std::to_string(x0) + ", " + std::to_string(y0) + ", " +
                      std::to_string(x1) + ", " + std::to_string(y1) + ")");
    }
    return {x0, y0, x1, y1};
  }

  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
  double area() const noexcept { return width() * height(); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

}  // namespace fusionbench
