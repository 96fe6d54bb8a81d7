// fusionbench: dataset validation, registration, fusion timing, quality
// metrics, detection evaluation and report rendering.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fusionbench/cli/commands.hpp"

namespace cli = fusionbench::cli;

namespace {

void add_manifest(CLI::App* app, std::string& target) {
  app->add_option("--manifest", target,
                  "Dataset manifest (relative paths fall back to $FUSIONBENCH_DATA_ROOT)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark infrared/visible image fusion: quality metrics, speed and detection"};
  app.require_subcommand(1);

  cli::ValidateOptions validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check a dataset manifest and its files");
  add_manifest(validate_cmd, validate.manifest);

  cli::AlignOptions align;
  auto* align_cmd =
      app.add_subcommand("align", "Warp unaligned infrared images into the visible frame");
  add_manifest(align_cmd, align.manifest);
  align_cmd->add_option("--out", align.out_dir, "Output dataset directory")->required();
  align_cmd->add_option("--homography", align.homography,
                        "3x3 infrared->visible homography for the whole dataset");
  align_cmd->add_option("--homography-dir", align.homography_dir,
                        "Directory of per-pair homographies named <pair_id>.txt");

  cli::BenchOptions bench;
  std::string bench_mode = "sidecar";
  auto* bench_cmd = app.add_subcommand("bench", "Time a fusion command over every aligned pair");
  add_manifest(bench_cmd, bench.manifest);
  bench_cmd->add_option("--command", bench.command,
                        "Command template with {vis} {ir} {out} {timing} {pair} placeholders");
  bench_cmd->add_option("--mode", bench_mode, "sidecar (tool-reported) or wall (upper bound)")
      ->check(CLI::IsMember({"sidecar", "wall"}));
  bench_cmd->add_option("--warmup", bench.warmup, "Warm-up invocations excluded from the mean")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--repeats", bench.repeats, "Timed passes over all pairs")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--sidecar", bench.sidecar,
                        "Ingest an existing pair,seconds file instead of running a command");
  bench_cmd->add_option("--algo", bench.algorithm, "Algorithm name for stored speed records");
  bench_cmd->add_option("--out", bench.out, "Results store to append speed records to");
  bench_cmd->add_option("--scratch", bench.scratch_dir, "Directory for timing files and outputs");
  bench_cmd->add_option("--fused-out", bench.output_dir,
                        "Directory for the fused images (default: <scratch>/fused)");
  bench_cmd->add_flag("--overwrite", bench.overwrite, "Replace records already stored");

  cli::MetricsOptions metrics;
  std::string psnr_mode = "mean-psnr";
  auto* metrics_cmd = app.add_subcommand("metrics", "Compute fusion quality metrics");
  add_manifest(metrics_cmd, metrics.manifest);
  metrics_cmd->add_option("--algos", metrics.algorithms, "Algorithms (default: all fused dirs)")
      ->delimiter(',');
  metrics_cmd->add_option("--out", metrics.out, "Results store (JSON Lines)")->required();
  metrics_cmd->add_option("--jobs", metrics.jobs, "Worker threads")->check(CLI::PositiveNumber);
  metrics_cmd->add_flag("--lenient", metrics.lenient,
                        "Skip unaligned pairs and missing fused images with a warning");
  metrics_cmd->add_flag("--overwrite", metrics.overwrite, "Replace records already stored");
  metrics_cmd->add_option("--psnr", psnr_mode, "mean-psnr or mean-mse")
      ->check(CLI::IsMember({"mean-psnr", "mean-mse"}));
  metrics_cmd->add_flag("!--raw-qabf", metrics.config.qabf.normalized,
                        "Use the raw edge-preservation sigmoids");

  cli::DetectEvalOptions detect;
  auto* detect_cmd = app.add_subcommand("detect-eval", "mAP@50 from detector exports");
  add_manifest(detect_cmd, detect.manifest);
  detect_cmd->add_option("--detections", detect.detections, "Detection JSON file(s)")
      ->required();
  detect_cmd->add_option("--scenario", detect.scenario, "all|day|night|smoke|underpass|other");
  detect_cmd->add_option("--iou", detect.iou, "IoU threshold for a true positive");
  detect_cmd->add_option("--format", detect.format, "markdown|csv|latex");
  detect_cmd->add_option("--out", detect.out, "Write the table here instead of stdout");
  detect_cmd->add_option("--label", detect.extra_labels,
                         "Extra detector label counted as the person class");

  std::vector<std::string> check_files;
  auto* check_cmd =
      app.add_subcommand("check-detections", "Validate detector exports against the schema");
  check_cmd->add_option("files", check_files, "Detection export JSON files")->required();

  cli::ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Render a results store as a table");
  report_cmd->add_option("--results", report.results, "Results store")->required();
  report_cmd->add_option("--format", report.format, "markdown|csv|latex");
  report_cmd->add_option("--scenario", report.scenario, "all|day|night|smoke|underpass|other");
  report_cmd->add_option("--out", report.out, "Write the table here instead of stdout");
  report_cmd->add_flag("--lenient", report.lenient, "Render missing cells as n/a");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*validate_cmd) return cli::cmd_validate(validate, std::cout, std::cerr);
  if (*align_cmd) return cli::cmd_align(align, std::cout, std::cerr);
  if (*bench_cmd) {
    bench.mode = bench_mode == "wall" ? fusionbench::TimingMode::Wall
                                      : fusionbench::TimingMode::Sidecar;
    return cli::cmd_bench(bench, std::cout, std::cerr);
  }
  if (*metrics_cmd) {
    metrics.config.psnr.aggregation = psnr_mode == "mean-mse"
                                          ? fusionbench::PsnrAggregation::MeanMse
                                          : fusionbench::PsnrAggregation::MeanOfPsnr;
    return cli::cmd_metrics(metrics, std::cout, std::cerr);
  }
  if (*detect_cmd) return cli::cmd_detect_eval(detect, std::cout, std::cerr);
  if (*check_cmd) return cli::cmd_check_detections(check_files, std::cout, std::cerr);
  if (*report_cmd) return cli::cmd_report(report, std::cout, std::cerr);
  return 1;
}
