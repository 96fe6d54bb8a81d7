#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fusionbench {

/// Quality metrics plus fusion speed, which shares the reporting path.
enum class Metric { Speed, EN, SD, MI, PSNR, Qabf, SSIM };

inline constexpr std::array<Metric, 6> kQualityMetrics = {Metric::EN,   Metric::SD,
                                                          Metric::MI,   Metric::PSNR,
                                                          Metric::Qabf, Metric::SSIM};

constexpr std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::Speed: return "Speed";
    case Metric::EN: return "EN";
    case Metric::SD: return "SD";
    case Metric::MI: return "MI";
    case Metric::PSNR: return "PSNR";
    case Metric::Qabf: return "Qabf";
    case Metric::SSIM: return "SSIM";
  }
  return "?";
}

inline std::optional<Metric> parse_metric(std::string_view s) {
  for (Metric m : {Metric::Speed, Metric::EN, Metric::SD, Metric::MI, Metric::PSNR, Metric::Qabf,
                   Metric::SSIM}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

/// Speed is the only metric where lower is better.
constexpr bool higher_is_better(Metric m) noexcept { return m != Metric::Speed; }

struct MetricValue {
  Metric name;
  double value;
  /// (visible, infrared) terms for the two-source metrics.
  std::optional<std::pair<double, double>> components;
};

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;

  double c1() const noexcept { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const noexcept { return (k2 * dynamic_range) * (k2 * dynamic_range); }

  /// Normalized 1-D Gaussian taps; the 2-D window is their outer product
  /// and therefore also sums to 1.
  std::vector<double> taps() const {
    std::vector<double> t(static_cast<std::size_t>(window));
    const int half = window / 2;
    double sum = 0.0;
    for (int i = 0; i < window; ++i) {
      const double d = i - half;
      t[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
      sum += t[i];
    }
    for (double& v : t) v /= sum;
    return t;
  }
};

/// Edge-preservation model constants (sigmoid gain/slope/midpoint for edge
/// strength and orientation). With `normalized`, each sigmoid is divided by
/// its value at perfect preservation so that an exact copy scores 1.
struct QabfParams {
  double gamma_g = 0.9994;
  double kappa_g = -15.0;
  double sigma_g = 0.5;
  double gamma_a = 0.9879;
  double kappa_a = -22.0;
  double sigma_a = 0.8;
  double weight_exponent = 1.0;
  bool normalized = true;
};

enum class PsnrAggregation {
  MeanOfPsnr,  // mean of the two per-source PSNR values
  MeanMse,     // PSNR of the mean of the two per-source MSEs
};

struct PsnrParams {
  double max_value = 255.0;
  double cap_db = 100.0;
  PsnrAggregation aggregation = PsnrAggregation::MeanOfPsnr;
};

struct MetricConfig {
  SsimParams ssim;
  QabfParams qabf;
  PsnrParams psnr;

  /// Constants echoed into result-file headers and report notes.
  std::map<std::string, std::string> describe() const {
    auto num = [](double v) {
      std::ostringstream s;
      s << v;
      return s.str();
    };
    return {
        {"entropy_log_base", "2"},
        {"mi_aggregation", "sum(MI(vis,F), MI(ir,F)), log base 2"},
        {"psnr", std::string(psnr.aggregation == PsnrAggregation::MeanOfPsnr
                                 ? "mean of per-source PSNR"
                                 : "PSNR of mean per-source MSE") +
                     ", MAX=" + num(psnr.max_value) + ", cap=" + num(psnr.cap_db) + " dB"},
        {"ssim", "sum of per-source SSIM; gaussian " + std::to_string(ssim.window) + "x" +
                     std::to_string(ssim.window) + " sigma=" + num(ssim.sigma) +
                     ", C1=(" + num(ssim.k1) + "*" + num(ssim.dynamic_range) + ")^2, C2=(" +
                     num(ssim.k2) + "*" + num(ssim.dynamic_range) + ")^2, valid windows"},
        {"qabf", "sobel on interior pixels; Gg=" + num(qabf.gamma_g) + " kg=" +
                     num(qabf.kappa_g) + " sg=" + num(qabf.sigma_g) + " Ga=" +
                     num(qabf.gamma_a) + " ka=" + num(qabf.kappa_a) + " sa=" +
                     num(qabf.sigma_a) + " L=" + num(qabf.weight_exponent) +
                     (qabf.normalized ? " (sigmoids normalized to 1 at perfect transfer)"
                                      : " (raw sigmoids)")},
        {"grayscale", "BT.601 luma, round half up"},
    };
  }
};

}  // namespace fusionbench
