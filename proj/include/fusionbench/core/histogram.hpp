#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fusionbench/core/image.hpp"

namespace fusionbench {

inline constexpr int kGrayLevels = 256;

/// Probability mass over the 256 gray levels of an 8-bit image.
class HistogramDistribution {
 public:
  explicit HistogramDistribution(const std::array<std::size_t, kGrayLevels>& counts,
                                 std::size_t total) {
    const double inv = 1.0 / static_cast<double>(total);
    for (int i = 0; i < kGrayLevels; ++i) bins_[i] = static_cast<double>(counts[i]) * inv;
  }

  double operator[](int level) const noexcept { return bins_[level]; }
  const std::array<double, kGrayLevels>& bins() const noexcept { return bins_; }
  static constexpr int levels() noexcept { return kGrayLevels; }

 private:
  std::array<double, kGrayLevels> bins_{};
};

/// Joint probability P_AB(a, b) over pairs of gray levels, row index a.
class JointHistogram {
 public:
  JointHistogram(std::vector<std::size_t> counts, std::size_t total)
      : cells_(counts.size()) {
    const double inv = 1.0 / static_cast<double>(total);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      cells_[i] = static_cast<double>(counts[i]) * inv;
    }
  }

  double operator()(int a, int b) const noexcept {
    return cells_[static_cast<std::size_t>(a) * kGrayLevels + static_cast<std::size_t>(b)];
  }
  const std::vector<double>& cells() const noexcept { return cells_; }

  std::array<double, kGrayLevels> marginal_a() const {
    std::array<double, kGrayLevels> m{};
    for (int a = 0; a < kGrayLevels; ++a)
      for (int b = 0; b < kGrayLevels; ++b) m[a] += (*this)(a, b);
    return m;
  }

  std::array<double, kGrayLevels> marginal_b() const {
    std::array<double, kGrayLevels> m{};
    for (int a = 0; a < kGrayLevels; ++a)
      for (int b = 0; b < kGrayLevels; ++b) m[b] += (*this)(a, b);
    return m;
  }

 private:
  std::vector<double> cells_;
};

inline std::array<std::size_t, kGrayLevels> gray_counts(const GrayImage& img) {
  std::array<std::size_t, kGrayLevels> counts{};
  for (std::uint8_t v : img.data()) ++counts[v];
  return counts;
}

inline HistogramDistribution histogram(const GrayImage& img) {
  return HistogramDistribution(gray_counts(img), img.pixel_count());
}

inline JointHistogram joint_histogram(const GrayImage& a, const GrayImage& b) {
  require_same_size("joint_histogram", a, b);
  std::vector<std::size_t> counts(static_cast<std::size_t>(kGrayLevels) * kGrayLevels, 0);
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    ++counts[static_cast<std::size_t>(da[i]) * kGrayLevels + db[i]];
  }
  return JointHistogram(std::move(counts), a.pixel_count());
}

}  // namespace fusionbench
