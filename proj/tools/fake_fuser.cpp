// Stand-in fusion tool for timing tests. Optionally "loads a model", then
// sleeps for a fixed time inside the timed region and writes the pixel mean
// of the two inputs. The timed region alone goes to the sidecar file.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "fusionbench/core/image.hpp"
#include "fusionbench/core/image_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fake fusion method with a known per-pair cost"};
  std::string vis, ir, out, timing, pair;
  double sleep_ms = 50.0;
  double load_ms = 0.0;
  app.add_option("--vis", vis)->required();
  app.add_option("--ir", ir)->required();
  app.add_option("--out", out)->required();
  app.add_option("--timing", timing, "Append 'pair,seconds' here");
  app.add_option("--pair", pair, "Pair id written to the timing file");
  app.add_option("--sleep-ms", sleep_ms, "Cost of the fusion call");
  app.add_option("--load-ms", load_ms, "Untimed start-up cost");
  CLI11_PARSE(app, argc, argv);

  try {
    std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(load_ms));
    const auto a = fusionbench::load_gray(vis);
    const auto b = fusionbench::load_gray(ir);
    fusionbench::require_same_size("fake fuser inputs", a, b);

    const auto start = std::chrono::steady_clock::now();
    std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(sleep_ms));
    fusionbench::GrayImage fused(a.width(), a.height());
    for (int y = 0; y < a.height(); ++y)
      for (int x = 0; x < a.width(); ++x)
        fused.at(x, y) = static_cast<std::uint8_t>((a.at(x, y) + b.at(x, y) + 1) / 2);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    fusionbench::save_png(fused, out);
    if (!timing.empty()) {
      std::ofstream t(timing, std::ios::app);
      t << (pair.empty() ? "pair" : pair) << ',' << seconds << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "fake_fuser: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
