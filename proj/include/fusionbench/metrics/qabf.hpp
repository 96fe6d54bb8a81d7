#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/image.hpp"
#include "fusionbench/metrics/types.hpp"

namespace fusionbench {

/// Sobel edge strength and orientation on the interior pixels of an image
/// (the one-pixel border lacks full kernel support). Orientation is
/// atan(sy / sx) in (-pi/2, pi/2], with pi/2 where sx == 0.
struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<double> strength;
  std::vector<double> orientation;
};

inline EdgeMap edge_map(const GrayImage& img) {
  if (img.width() < 3 || img.height() < 3) {
    throw Error(ErrorCode::ImageTooSmall, "Sobel needs at least 3x3 pixels, got " +
                                              std::to_string(img.width()) + "x" +
                                              std::to_string(img.height()));
  }
  EdgeMap e;
  e.width = img.width() - 2;
  e.height = img.height() - 2;
  e.strength.resize(static_cast<std::size_t>(e.width) * e.height);
  e.orientation.resize(e.strength.size());
  auto p = [&img](int x, int y) { return static_cast<double>(img.at(x, y)); };
  for (int y = 1; y + 1 < img.height(); ++y) {
    for (int x = 1; x + 1 < img.width(); ++x) {
      const double sx = (p(x + 1, y - 1) + 2.0 * p(x + 1, y) + p(x + 1, y + 1)) -
                        (p(x - 1, y - 1) + 2.0 * p(x - 1, y) + p(x - 1, y + 1));
      const double sy = (p(x - 1, y + 1) + 2.0 * p(x, y + 1) + p(x + 1, y + 1)) -
                        (p(x - 1, y - 1) + 2.0 * p(x, y - 1) + p(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y - 1) * e.width + (x - 1);
      e.strength[i] = std::sqrt(sx * sx + sy * sy);
      e.orientation[i] = sx == 0.0 ? std::numbers::pi / 2.0 : std::atan(sy / sx);
    }
  }
  return e;
}

namespace detail {

struct PreservationModel {
  explicit PreservationModel(const QabfParams& p) : params(p) {
    strength_norm = p.normalized ? strength_sigmoid(1.0) : 1.0;
    orientation_norm = p.normalized ? orientation_sigmoid(1.0) : 1.0;
  }

  double strength_sigmoid(double g) const {
    return params.gamma_g / (1.0 + std::exp(params.kappa_g * (g - params.sigma_g)));
  }
  double orientation_sigmoid(double a) const {
    return params.gamma_a / (1.0 + std::exp(params.kappa_a * (a - params.sigma_a)));
  }

  /// Q_SF at one pixel: product of strength and orientation preservation.
  double operator()(double g_src, double a_src, double g_fused, double a_fused) const {
    double relative = 1.0;
    if (g_src > g_fused) {
      relative = g_fused / g_src;
    } else if (g_src < g_fused) {
      relative = g_src / g_fused;
    }
    const double orient = 1.0 - std::abs(a_src - a_fused) / (std::numbers::pi / 2.0);
    return (strength_sigmoid(relative) / strength_norm) *
           (orientation_sigmoid(orient) / orientation_norm);
  }

  QabfParams params;
  double strength_norm = 1.0;
  double orientation_norm = 1.0;
};

}  // namespace detail

/// Edge-preservation map Q_SF for one source against the fused image.
inline std::vector<double> edge_preservation(const EdgeMap& source, const EdgeMap& fused,
                                             const QabfParams& params = {}) {
  const detail::PreservationModel model(params);
  std::vector<double> q(source.strength.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = model(source.strength[i], source.orientation[i], fused.strength[i],
                 fused.orientation[i]);
  }
  return q;
}

/// Edge-strength-weighted mean of the two preservation maps. When neither
/// source has any edge the metric is 0.
inline MetricValue qabf(const GrayImage& vis, const GrayImage& ir, const GrayImage& fused,
                        const QabfParams& params = {}) {
  require_same_size("qabf", vis, ir, fused);
  const EdgeMap ea = edge_map(vis);
  const EdgeMap eb = edge_map(ir);
  const EdgeMap ef = edge_map(fused);
  const auto qa = edge_preservation(ea, ef, params);
  const auto qb = edge_preservation(eb, ef, params);

  double num = 0.0;
  double den = 0.0;
  double num_a = 0.0;
  double den_a = 0.0;
  double num_b = 0.0;
  double den_b = 0.0;
  for (std::size_t i = 0; i < qa.size(); ++i) {
    const double wa = std::pow(ea.strength[i], params.weight_exponent);
    const double wb = std::pow(eb.strength[i], params.weight_exponent);
    num += qa[i] * wa + qb[i] * wb;
    den += wa + wb;
    num_a += qa[i] * wa;
    den_a += wa;
    num_b += qb[i] * wb;
    den_b += wb;
  }
  const double value = den > 0.0 ? num / den : 0.0;
  return {Metric::Qabf, value,
          std::make_pair(den_a > 0.0 ? num_a / den_a : 0.0, den_b > 0.0 ? num_b / den_b : 0.0)};
}

}  // namespace fusionbench
