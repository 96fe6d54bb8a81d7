#pragma once

// Coarse registration: projective warping by a supplied homography and
// cropping to the region where the warped image has full coverage.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/image.hpp"
#include "fusionbench/core/manifest.hpp"

namespace fusionbench {

/// 3x3 projective transform mapping source coordinates to destination
/// coordinates, stored row-major and normalized so that h[2][2] == 1.
class Homography {
 public:
  Homography() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

  explicit Homography(const std::array<double, 9>& m) : m_(m) {
    for (double v : m_) {
      if (!std::isfinite(v)) throw Error(ErrorCode::SingularHomography, "non-finite entry");
    }
    if (std::abs(m_[8]) < 1e-300) {
      throw Error(ErrorCode::SingularHomography, "h[2][2] is zero; cannot normalize");
    }
    const double s = m_[8];
    for (double& v : m_) v /= s;
    m_[8] = 1.0;
    double scale = 0.0;
    for (double v : m_) scale = std::max(scale, std::abs(v));
    if (std::abs(determinant()) <= 1e-12 * scale * scale * scale) {
      throw Error(ErrorCode::SingularHomography, "determinant is zero");
    }
  }

  static Homography identity() { return Homography(); }
  static Homography translation(double dx, double dy) {
    return Homography({1, 0, dx, 0, 1, dy, 0, 0, 1});
  }

  double operator()(int row, int col) const noexcept { return m_[row * 3 + col]; }
  const std::array<double, 9>& matrix() const noexcept { return m_; }

  double determinant() const noexcept {
    const auto& a = m_;
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
  }

  Homography inverse() const {
    const auto& a = m_;
    const double det = determinant();
    std::array<double, 9> inv = {
        (a[4] * a[8] - a[5] * a[7]) / det, (a[2] * a[7] - a[1] * a[8]) / det,
        (a[1] * a[5] - a[2] * a[4]) / det, (a[5] * a[6] - a[3] * a[8]) / det,
        (a[0] * a[8] - a[2] * a[6]) / det, (a[2] * a[3] - a[0] * a[5]) / det,
        (a[3] * a[7] - a[4] * a[6]) / det, (a[1] * a[6] - a[0] * a[7]) / det,
        (a[0] * a[4] - a[1] * a[3]) / det};
    return Homography(inv);
  }

  /// this * other: apply `other` first, then this.
  Homography operator*(const Homography& other) const {
    std::array<double, 9> r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r[i * 3 + j] += (*this)(i, k) * other(k, j);
    return Homography(r);
  }

  /// Maps (x, y); returns false for points sent to infinity.
  bool apply(double x, double y, double& ox, double& oy) const noexcept {
    const double w = m_[6] * x + m_[7] * y + m_[8];
    if (std::abs(w) < 1e-12) return false;
    ox = (m_[0] * x + m_[1] * y + m_[2]) / w;
    oy = (m_[3] * x + m_[4] * y + m_[5]) / w;
    return true;
  }

 private:
  std::array<double, 9> m_;
};

/// Reads a calibration file: nine numbers, row-major, separated by
/// whitespace or commas. '#' starts a comment.
inline Homography parse_homography(std::string_view text) {
  std::string cleaned;
  bool comment = false;
  for (char c : text) {
    if (c == '#') comment = true;
    if (c == '\n') comment = false;
    cleaned += (comment || c == ',') ? ' ' : c;
  }
  std::istringstream in(cleaned);
  std::array<double, 9> m{};
  std::size_t n = 0;
  for (std::string tok; in >> tok;) {
    if (n == 9) throw Error(ErrorCode::SchemaViolation, "calibration file has more than 9 numbers");
    try {
      std::size_t used = 0;
      m[n] = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::SchemaViolation, "calibration value '" + tok + "' is not a number");
    }
    ++n;
  }
  if (n != 9) {
    throw Error(ErrorCode::SchemaViolation,
                "calibration file needs 9 numbers, found " + std::to_string(n));
  }
  return Homography(m);
}

inline Homography load_homography(const std::filesystem::path& path) {
  return parse_homography(read_text_file(path));
}

struct CropRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  friend bool operator==(const CropRect&, const CropRect&) = default;
};

namespace detail {

inline constexpr double kEdgeTolerance = 1e-9;

/// Source location sampled by output pixel (x, y), clamped onto the raster
/// when within tolerance of its edge. False when outside.
inline bool source_location(const Homography& inv, int x, int y, int src_w, int src_h,
                            double& sx, double& sy) {
  if (!inv.apply(x, y, sx, sy)) return false;
  if (sx < -kEdgeTolerance || sy < -kEdgeTolerance || sx > src_w - 1 + kEdgeTolerance ||
      sy > src_h - 1 + kEdgeTolerance) {
    return false;
  }
  sx = std::clamp(sx, 0.0, static_cast<double>(src_w - 1));
  sy = std::clamp(sy, 0.0, static_cast<double>(src_h - 1));
  return true;
}

template <int C>
Image<C> warp_impl(const Image<C>& src, const Homography& h, int out_w, int out_h,
                   std::vector<bool>* coverage) {
  const Homography inv = h.inverse();
  Image<C> out(out_w, out_h);
  if (coverage) coverage->assign(static_cast<std::size_t>(out_w) * out_h, false);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double sx = 0;
      double sy = 0;
      if (!source_location(inv, x, y, src.width(), src.height(), sx, sy)) continue;
      if (coverage) (*coverage)[static_cast<std::size_t>(y) * out_w + x] = true;
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const int x1 = std::min(x0 + 1, src.width() - 1);
      const int y1 = std::min(y0 + 1, src.height() - 1);
      const double fx = sx - x0;
      const double fy = sy - y0;
      for (int c = 0; c < C; ++c) {
        const double top = src.at(x0, y0, c) * (1.0 - fx) + src.at(x1, y0, c) * fx;
        const double bottom = src.at(x0, y1, c) * (1.0 - fx) + src.at(x1, y1, c) * fx;
        const double v = top * (1.0 - fy) + bottom * fy;
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

/// Largest axis-aligned rectangle of set cells (histogram/stack method).
/// Ties keep the first rectangle found scanning rows top to bottom.
inline CropRect largest_full_rectangle(const std::vector<bool>& mask, int w, int h) {
  std::vector<int> heights(static_cast<std::size_t>(w), 0);
  CropRect best;
  long long best_area = 0;
  std::vector<int> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      heights[x] = mask[static_cast<std::size_t>(y) * w + x] ? heights[x] + 1 : 0;
    }
    stack.clear();
    for (int x = 0; x <= w; ++x) {
      const int cur = x < w ? heights[x] : 0;
      while (!stack.empty() && heights[stack.back()] >= cur) {
        const int height = heights[stack.back()];
        stack.pop_back();
        const int left = stack.empty() ? 0 : stack.back() + 1;
        const long long area = static_cast<long long>(height) * (x - left);
        if (area > best_area) {
          best_area = area;
          best = {left, y - height + 1, x - left, height};
        }
      }
      stack.push_back(x);
    }
  }
  return best;
}

}  // namespace detail

/// Resamples `src` into an out_w x out_h frame: each output pixel reads the
/// source at h^-1 (x, y, 1) with bilinear interpolation; samples outside the
/// source are 0.
template <int C>
Image<C> warp(const Image<C>& src, const Homography& h, int out_w, int out_h) {
  return detail::warp_impl(src, h, out_w, out_h, nullptr);
}

template <int C>
Image<C> crop(const Image<C>& img, const CropRect& r) {
  if (r.width <= 0 || r.height <= 0 || r.x < 0 || r.y < 0 || r.x + r.width > img.width() ||
      r.y + r.height > img.height()) {
    throw Error(ErrorCode::InvalidArgument, "crop rectangle outside image");
  }
  Image<C> out(r.width, r.height);
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x)
      for (int c = 0; c < C; ++c) out.at(x, y, c) = img.at(r.x + x, r.y + y, c);
  return out;
}

template <int CA, int CB>
struct OverlapResult {
  Image<CA> a;
  Image<CB> b;
  CropRect rect;
};

/// Warps `b` into the frame of `a` by `h`, then crops both to the largest
/// axis-aligned rectangle in which the warped `b` has full coverage.
template <int CA, int CB>
OverlapResult<CA, CB> overlap_crop(const Image<CA>& a, const Image<CB>& b, const Homography& h) {
  std::vector<bool> coverage;
  const Image<CB> warped = detail::warp_impl(b, h, a.width(), a.height(), &coverage);
  const CropRect rect = detail::largest_full_rectangle(coverage, a.width(), a.height());
  if (rect.width == 0 || rect.height == 0) {
    throw Error(ErrorCode::EmptyOverlap, "warped image does not overlap the reference frame");
  }
  return {crop(a, rect), crop(warped, rect), rect};
}

}  // namespace fusionbench
