#pragma once

#include <algorithm>

#include "fusionbench/core/histogram.hpp"
#include "fusionbench/core/image.hpp"
#include "fusionbench/metrics/statistics.hpp"
#include "fusionbench/metrics/types.hpp"

namespace fusionbench {

/// MI(A, F) in bits, evaluated as H(A) + H(F) - H(A, F). The joint cells are
/// visited in the same order as the marginal bins, so MI(X, X) == H(X)
/// holds exactly.
inline double mutual_information(const GrayImage& source, const GrayImage& fused) {
  require_same_size("mutual_information", source, fused);
  const double ha = entropy(histogram(source));
  const double hf = entropy(histogram(fused));
  const double hj = detail::shannon_bits(joint_histogram(source, fused).cells());
  return std::max(0.0, ha + hf - hj);
}

/// Sum of the visible-fused and infrared-fused terms.
inline MetricValue mutual_information(const GrayImage& vis, const GrayImage& ir,
                                      const GrayImage& fused) {
  require_same_size("mutual_information", vis, ir, fused);
  const double a = mutual_information(vis, fused);
  const double b = mutual_information(ir, fused);
  return {Metric::MI, a + b, std::make_pair(a, b)};
}

}  // namespace fusionbench
