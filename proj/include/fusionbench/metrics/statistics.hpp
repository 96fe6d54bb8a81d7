#pragma once

#include <cmath>
#include <span>

#include "fusionbench/core/histogram.hpp"
#include "fusionbench/core/image.hpp"
#include "fusionbench/metrics/types.hpp"

namespace fusionbench {

namespace detail {
/// -sum p log2 p over a sequence of probabilities; zero terms are skipped.
template <class Range>
double shannon_bits(const Range& probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}
}  // namespace detail

inline double entropy(const HistogramDistribution& hist) { return detail::shannon_bits(hist.bins()); }

inline MetricValue entropy(const GrayImage& img) {
  return {Metric::EN, entropy(histogram(img)), std::nullopt};
}

/// Population standard deviation of real-valued samples, two-pass.
inline double std_dev(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

/// Population (1/MN) standard deviation of intensities, from the gray-level
/// histogram.
inline MetricValue std_dev(const GrayImage& img) {
  const auto hist = histogram(img);
  double mean = 0.0;
  for (int i = 0; i < kGrayLevels; ++i) mean += i * hist[i];
  double var = 0.0;
  for (int i = 0; i < kGrayLevels; ++i) {
    const double d = i - mean;
    var += d * d * hist[i];
  }
  return {Metric::SD, std::sqrt(var), std::nullopt};
}

}  // namespace fusionbench
