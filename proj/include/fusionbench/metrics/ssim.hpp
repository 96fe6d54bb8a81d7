#pragma once

#include <string>
#include <vector>

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/image.hpp"
#include "fusionbench/metrics/types.hpp"

namespace fusionbench {

namespace detail {

/// Gaussian-weighted local sums over every fully contained window, computed
/// separably: rows first, then columns. Output is (W-k+1) x (H-k+1).
class WindowFilter {
 public:
  WindowFilter(std::vector<double> taps, int width, int height)
      : taps_(std::move(taps)),
        k_(static_cast<int>(taps_.size())),
        width_(width),
        height_(height),
        out_w_(width - k_ + 1),
        out_h_(height - k_ + 1),
        row_pass_(static_cast<std::size_t>(out_w_) * height) {}

  int out_width() const noexcept { return out_w_; }
  int out_height() const noexcept { return out_h_; }

  template <class Sample>
  std::vector<double> apply(Sample&& sample) {
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < out_w_; ++x) {
        double acc = 0.0;
        for (int i = 0; i < k_; ++i) acc += taps_[i] * sample(x + i, y);
        row_pass_[static_cast<std::size_t>(y) * out_w_ + x] = acc;
      }
    }
    std::vector<double> out(static_cast<std::size_t>(out_w_) * out_h_);
    for (int y = 0; y < out_h_; ++y) {
      for (int x = 0; x < out_w_; ++x) {
        double acc = 0.0;
        for (int i = 0; i < k_; ++i) {
          acc += taps_[i] * row_pass_[static_cast<std::size_t>(y + i) * out_w_ + x];
        }
        out[static_cast<std::size_t>(y) * out_w_ + x] = acc;
      }
    }
    return out;
  }

 private:
  std::vector<double> taps_;
  int k_;
  int width_;
  int height_;
  int out_w_;
  int out_h_;
  std::vector<double> row_pass_;
};

}  // namespace detail

/// Mean SSIM between a source and the fused image over all valid windows.
inline double ssim(const GrayImage& a, const GrayImage& f, const SsimParams& params = {}) {
  require_same_size("ssim", a, f);
  if (a.width() < params.window || a.height() < params.window) {
    throw Error(ErrorCode::ImageTooSmall,
                "ssim needs at least " + std::to_string(params.window) + "x" +
                    std::to_string(params.window) + " pixels, got " + std::to_string(a.width()) +
                    "x" + std::to_string(a.height()));
  }
  detail::WindowFilter filter(params.taps(), a.width(), a.height());
  auto pa = [&a](int x, int y) { return static_cast<double>(a.at(x, y)); };
  auto pf = [&f](int x, int y) { return static_cast<double>(f.at(x, y)); };
  const auto mu_a = filter.apply(pa);
  const auto mu_f = filter.apply(pf);
  const auto e_aa = filter.apply([&](int x, int y) { return pa(x, y) * pa(x, y); });
  const auto e_ff = filter.apply([&](int x, int y) { return pf(x, y) * pf(x, y); });
  const auto e_af = filter.apply([&](int x, int y) { return pa(x, y) * pf(x, y); });

  const double c1 = params.c1();
  const double c2 = params.c2();
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double var_a = e_aa[i] - mu_a[i] * mu_a[i];
    const double var_f = e_ff[i] - mu_f[i] * mu_f[i];
    const double cov = e_af[i] - mu_a[i] * mu_f[i];
    const double num = (2.0 * mu_a[i] * mu_f[i] + c1) * (2.0 * cov + c2);
    const double den = (mu_a[i] * mu_a[i] + mu_f[i] * mu_f[i] + c1) * (var_a + var_f + c2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

/// SSIM(vis, F) + SSIM(ir, F). The total ranges over [-2, 2].
inline MetricValue ssim_fusion(const GrayImage& vis, const GrayImage& ir, const GrayImage& fused,
                               const SsimParams& params = {}) {
  require_same_size("ssim_fusion", vis, ir, fused);
  const double a = ssim(vis, fused, params);
  const double b = ssim(ir, fused, params);
  return {Metric::SSIM, a + b, std::make_pair(a, b)};
}

}  // namespace fusionbench
