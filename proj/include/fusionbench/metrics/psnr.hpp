#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "fusionbench/core/image.hpp"
#include "fusionbench/metrics/types.hpp"

namespace fusionbench {

inline double mean_squared_error(const GrayImage& a, const GrayImage& b) {
  require_same_size("mean_squared_error", a, b);
  std::uint64_t sum = 0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const int d = static_cast<int>(da[i]) - static_cast<int>(db[i]);
    sum += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(sum) / static_cast<double>(a.pixel_count());
}

/// 10 log10(MAX^2 / MSE), capped at `cap_db` (zero error maps to the cap).
inline double psnr_from_mse(double mse, const PsnrParams& params = {}) {
  if (mse <= 0.0) return params.cap_db;
  return std::min(params.cap_db, 10.0 * std::log10(params.max_value * params.max_value / mse));
}

inline MetricValue psnr(const GrayImage& vis, const GrayImage& ir, const GrayImage& fused,
                        const PsnrParams& params = {}) {
  require_same_size("psnr", vis, ir, fused);
  const double mse_vis = mean_squared_error(vis, fused);
  const double mse_ir = mean_squared_error(ir, fused);
  const double a = psnr_from_mse(mse_vis, params);
  const double b = psnr_from_mse(mse_ir, params);
  const double value = params.aggregation == PsnrAggregation::MeanOfPsnr
                           ? 0.5 * (a + b)
                           : psnr_from_mse(0.5 * (mse_vis + mse_ir), params);
  return {Metric::PSNR, value, std::make_pair(a, b)};
}

}  // namespace fusionbench
