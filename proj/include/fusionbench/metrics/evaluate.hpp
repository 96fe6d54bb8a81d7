#pragma once

#include <variant>
#include <vector>

#include "fusionbench/core/image.hpp"
#include "fusionbench/core/image_io.hpp"
#include "fusionbench/core/manifest.hpp"
#include "fusionbench/metrics/mutual_information.hpp"
#include "fusionbench/metrics/psnr.hpp"
#include "fusionbench/metrics/qabf.hpp"
#include "fusionbench/metrics/ssim.hpp"
#include "fusionbench/metrics/statistics.hpp"
#include "fusionbench/metrics/types.hpp"

namespace fusionbench {

/// All six metrics on gray rasters, in the order EN, SD, MI, PSNR, Qabf, SSIM.
inline std::vector<MetricValue> evaluate_gray(const GrayImage& vis, const GrayImage& ir,
                                              const GrayImage& fused,
                                              const MetricConfig& config = {}) {
  require_same_size("evaluate", vis, ir, fused);
  return {
      entropy(fused),
      std_dev(fused),
      mutual_information(vis, ir, fused),
      psnr(vis, ir, fused, config.psnr),
      qabf(vis, ir, fused, config.qabf),
      ssim_fusion(vis, ir, fused, config.ssim),
  };
}

inline std::vector<MetricValue> evaluate_all(const ImagePair& pair, const AnyImage& fused,
                                             const MetricConfig& config = {}) {
  const GrayImage fused_gray = std::visit([](const auto& i) { return to_grayscale(i); }, fused);
  return evaluate_gray(to_grayscale(pair.visible), pair.infrared, fused_gray, config);
}

}  // namespace fusionbench
