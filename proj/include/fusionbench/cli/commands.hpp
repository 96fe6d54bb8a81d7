#pragma once

// Subcommand implementations behind the fusionbench executable. Each returns
// a process exit status: 0 success, 1 validation failure, 2 I/O error,
// 3 internal invariant violation. Diagnostics go to `err`, primary output
// (summaries, rendered tables) to `out`.

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/image_io.hpp"
#include "fusionbench/core/manifest.hpp"
#include "fusionbench/detection/average_precision.hpp"
#include "fusionbench/detection/detections_json.hpp"
#include "fusionbench/detection/yolo.hpp"
#include "fusionbench/metrics/evaluate.hpp"
#include "fusionbench/registration.hpp"
#include "fusionbench/reporting/render.hpp"
#include "fusionbench/reporting/report.hpp"
#include "fusionbench/reporting/results_store.hpp"
#include "fusionbench/speed/timing.hpp"

namespace fusionbench::cli {

inline constexpr const char* kDataRootEnv = "FUSIONBENCH_DATA_ROOT";
inline constexpr const char* kDefaultManifestName = "manifest.txt";

/// Explicit path if it exists (or is absolute); otherwise relative to
/// $FUSIONBENCH_DATA_ROOT. An empty path means the root's manifest.txt.
inline std::filesystem::path resolve_manifest_path(const std::string& given) {
  const char* root = std::getenv(kDataRootEnv);
  if (given.empty()) {
    if (!root) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("--manifest not given and ") + kDataRootEnv + " is unset");
    }
    return std::filesystem::path(root) / kDefaultManifestName;
  }
  std::filesystem::path p(given);
  std::error_code ec;
  if (p.is_absolute() || std::filesystem::exists(p, ec) || !root) return p;
  return std::filesystem::path(root) / p;
}

/// "all" (or empty) means no filter.
inline std::optional<Scenario> parse_scenario_filter(const std::string& s) {
  if (s.empty() || s == "all") return std::nullopt;
  auto sc = parse_scenario(s);
  if (!sc) throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + s + "'");
  return sc;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

inline void print_counts(const DatasetManifest& m, std::ostream& out) {
  out << "dataset " << (m.name.empty() ? "(unnamed)" : m.name) << ": " << m.entries.size()
      << " pairs\n";
  out << "scenario     pairs  aligned  annotated\n";
  const auto counts = m.counts();
  for (Scenario s : kAllScenarios) {
    auto it = counts.find(s);
    if (it == counts.end()) continue;
    char line[96];
    std::snprintf(line, sizeof(line), "%-11s %6zu %8zu %10zu\n",
                  std::string(to_string(s)).c_str(), it->second.pairs, it->second.aligned,
                  it->second.annotated);
    out << line;
  }
}

// ---------------------------------------------------------------- validate

struct ValidateOptions {
  std::string manifest;
};

/// Collects every finding rather than stopping at the first.
inline std::vector<Diagnostic> validate_manifest(const DatasetManifest& m,
                                                 std::vector<std::string>* warnings = nullptr) {
  std::vector<Diagnostic> diags = find_dangling_paths(m);
  std::set<std::string> dangling;
  for (const auto& d : diags) dangling.insert(d.pair_id);

  auto info = [&](const ManifestEntry& e, const std::string& path) -> std::optional<ImageInfo> {
    try {
      return read_image_info(m.resolve(path));
    } catch (const Error& ex) {
      diags.push_back({ex.code(), e.pair_id, ex.what()});
      return std::nullopt;
    }
  };
  auto size_str = [](const ImageInfo& i) {
    return std::to_string(i.width) + "x" + std::to_string(i.height);
  };

  for (const auto& e : m.entries) {
    if (dangling.count(e.pair_id)) continue;
    const auto vis = info(e, e.visible_path);
    const auto ir = info(e, e.infrared_path);
    if (vis && ir && e.aligned && (vis->width != ir->width || vis->height != ir->height)) {
      diags.push_back({ErrorCode::DimensionMismatch, e.pair_id,
                       "visible " + size_str(*vis) + " vs infrared " + size_str(*ir)});
    }
    if (vis && e.annotation_path) {
      try {
        parse_yolo_annotations(m.resolve(*e.annotation_path), vis->width, vis->height);
      } catch (const Error& ex) {
        diags.push_back({ex.code(), e.pair_id, ex.what()});
      }
    }
    for (const auto& [algo, dir] : m.fused_dirs) {
      const auto fused = m.fused_image_path(algo, e.pair_id);
      std::error_code ec;
      if (!std::filesystem::is_regular_file(fused, ec)) {
        if (warnings) {
          warnings->push_back("warning[MissingFusedImage] pair=" + e.pair_id + ": " + algo +
                              " output not found: " + fused.string());
        }
        continue;
      }
      try {
        const auto f = read_image_info(fused);
        if (vis && (f.width != vis->width || f.height != vis->height)) {
          diags.push_back({ErrorCode::DimensionMismatch, e.pair_id,
                           algo + " fused " + size_str(f) + " vs visible " + size_str(*vis)});
        }
      } catch (const Error& ex) {
        diags.push_back({ex.code(), e.pair_id, ex.what()});
      }
    }
  }
  return diags;
}

inline int cmd_validate(const ValidateOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DatasetManifest m = load_manifest_unchecked(resolve_manifest_path(opt.manifest));
    std::vector<std::string> warnings;
    const auto diags = validate_manifest(m, &warnings);
    for (const auto& w : warnings) err << w << "\n";
    for (const auto& d : diags) err << d.str() << "\n";
    print_counts(m, out);
    if (!diags.empty()) {
      out << diags.size() << " problem(s) found\n";
      return 1;
    }
    out << "manifest OK\n";
    return 0;
  });
}

// ------------------------------------------------------------------- align

struct AlignOptions {
  std::string manifest;
  std::string out_dir;
  /// Dataset-wide calibration file.
  std::string homography;
  /// Directory of per-pair calibration files named <pair_id>.txt; these
  /// take precedence over the dataset-wide file.
  std::string homography_dir;
};

inline std::string relative_to(const std::filesystem::path& p, const std::filesystem::path& base) {
  std::error_code ec;
  auto rel = std::filesystem::relative(std::filesystem::absolute(p), std::filesystem::absolute(base), ec);
  return ec || rel.empty() ? std::filesystem::absolute(p).string() : rel.string();
}

/// Moves YOLO boxes from the original visible frame into the crop, clipping
/// to it and dropping boxes that fall outside.
inline std::vector<GroundTruthBox> crop_annotations(const std::vector<GroundTruthBox>& boxes,
                                                    const CropRect& r) {
  std::vector<GroundTruthBox> out;
  for (const auto& g : boxes) {
    const double x0 = std::max(g.box.x_min - r.x, 0.0);
    const double y0 = std::max(g.box.y_min - r.y, 0.0);
    const double x1 = std::min(g.box.x_max - r.x, static_cast<double>(r.width));
    const double y1 = std::min(g.box.y_max - r.y, static_cast<double>(r.height));
    if (x0 < x1 && y0 < y1) out.push_back({g.class_id, {x0, y0, x1, y1}});
  }
  return out;
}

inline int cmd_align(const AlignOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DatasetManifest m = parse_manifest(resolve_manifest_path(opt.manifest));
    if (opt.out_dir.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
    const std::filesystem::path dir(opt.out_dir);
    std::filesystem::create_directories(dir);
    std::optional<Homography> dataset_h;
    if (!opt.homography.empty()) dataset_h = load_homography(opt.homography);

    DatasetManifest aligned;
    aligned.name = m.name;
    aligned.registration = "infrared->visible";
    aligned.base_dir = dir;
    std::ofstream rects(dir / "registration.csv");
    rects << "pair_id,x,y,width,height\n";
    std::size_t warped = 0;

    for (const auto& e : m.entries) {
      ManifestEntry ne = e;
      ne.visible_path = relative_to(m.resolve(e.visible_path), dir);
      ne.infrared_path = relative_to(m.resolve(e.infrared_path), dir);
      if (e.annotation_path) ne.annotation_path = relative_to(m.resolve(*e.annotation_path), dir);
      if (e.aligned) {
        aligned.entries.push_back(std::move(ne));
        continue;
      }
      std::optional<Homography> h = dataset_h;
      if (!opt.homography_dir.empty()) {
        const auto per_pair = std::filesystem::path(opt.homography_dir) / (e.pair_id + ".txt");
        std::error_code ec;
        if (std::filesystem::is_regular_file(per_pair, ec)) h = load_homography(per_pair);
      }
      if (!h) {
        throw Error(ErrorCode::InvalidArgument, "no homography for unaligned pair " + e.pair_id);
      }
      const ColorImage vis = load_color(m.resolve(e.visible_path));
      const GrayImage ir = load_gray(m.resolve(e.infrared_path));
      const auto result = overlap_crop(vis, ir, *h);
      save_png(result.a, dir / "visible" / (e.pair_id + ".png"));
      save_png(result.b, dir / "infrared" / (e.pair_id + ".png"));
      ne.visible_path = "visible/" + e.pair_id + ".png";
      ne.infrared_path = "infrared/" + e.pair_id + ".png";
      if (e.annotation_path) {
        const auto boxes =
            parse_yolo_annotations(m.resolve(*e.annotation_path), vis.width(), vis.height());
        const auto moved = crop_annotations(boxes, result.rect);
        const auto label_path = dir / "labels" / (e.pair_id + ".txt");
        std::filesystem::create_directories(label_path.parent_path());
        std::ofstream(label_path) << format_yolo(moved, result.rect.width, result.rect.height);
        ne.annotation_path = "labels/" + e.pair_id + ".txt";
      }
      ne.aligned = true;
      rects << e.pair_id << ',' << result.rect.x << ',' << result.rect.y << ','
            << result.rect.width << ',' << result.rect.height << '\n';
      aligned.entries.push_back(std::move(ne));
      ++warped;
    }
    std::ofstream(dir / kDefaultManifestName) << serialize_manifest(aligned);
    out << "aligned " << warped << " pair(s) (infrared warped into the visible frame); "
        << (m.entries.size() - warped) << " already aligned\n";
    out << "wrote " << (dir / kDefaultManifestName).string() << "\n";
    if (!m.fused_dirs.empty()) {
      err << "note: fused directories were not carried over; re-run fusion on the aligned pairs\n";
    }
    return 0;
  });
}

// ----------------------------------------------------------------- metrics

struct MetricsOptions {
  std::string manifest;
  std::vector<std::string> algorithms;  // empty: every fused directory
  std::string out;
  int jobs = 1;
  bool lenient = false;
  bool overwrite = false;
  MetricConfig config;
};

inline int cmd_metrics(const MetricsOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DatasetManifest m = parse_manifest(resolve_manifest_path(opt.manifest));
    if (opt.out.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
    std::vector<std::string> algos = opt.algorithms;
    if (algos.empty()) {
      for (const auto& [a, d] : m.fused_dirs) algos.push_back(a);
    }
    if (algos.empty()) throw Error(ErrorCode::InvalidArgument, "no algorithms to evaluate");
    for (const auto& a : algos) {
      if (!m.fused_dir(a)) {
        throw Error(ErrorCode::InvalidArgument, "manifest has no fused directory for '" + a + "'");
      }
    }

    const std::size_t n = m.entries.size();
    std::vector<std::vector<MetricRecord>> results(n);
    std::vector<std::vector<std::string>> warnings(n);
    std::vector<std::exception_ptr> failures(n);
    std::vector<std::size_t> evaluated(n, 0);

    auto work = [&](std::size_t i) {
      const ManifestEntry& e = m.entries[i];
      if (!e.aligned) {
        Error ex(ErrorCode::NotAligned, "pair " + e.pair_id + " is not aligned");
        if (!opt.lenient) throw ex;
        warnings[i].push_back(std::string("warning: ") + ex.what() + "; skipped");
        return;
      }
      const ImagePair pair = load_pair(m, e);
      for (const auto& algo : algos) {
        const auto path = m.fused_image_path(algo, e.pair_id);
        std::error_code ec;
        if (!std::filesystem::is_regular_file(path, ec)) {
          Error ex(ErrorCode::MissingFusedImage, algo + " output for pair " + e.pair_id +
                                                     " not found: " + path.string());
          if (!opt.lenient) throw ex;
          warnings[i].push_back(std::string("warning: ") + ex.what() + "; skipped");
          continue;
        }
        const auto values = evaluate_all(pair, load_image(path), opt.config);
        for (const auto& v : values) {
          results[i].push_back({e.pair_id, e.scenario, algo, v.name, v.value, v.components,
                                std::nullopt, std::nullopt});
        }
        ++evaluated[i];
      }
    };

    const unsigned workers = static_cast<unsigned>(std::max(1, opt.jobs));
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          work(i);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers && t < n; ++t) pool.emplace_back(loop);
    loop();
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& w : warnings[i]) err << w << "\n";
      if (failures[i]) std::rethrow_exception(failures[i]);
    }
    std::vector<MetricRecord> all;
    std::size_t triples = 0;
    for (std::size_t i = 0; i < n; ++i) {
      all.insert(all.end(), results[i].begin(), results[i].end());
      triples += evaluated[i];
    }
    ResultsStore store(opt.out);
    store.commit(all, opt.overwrite, opt.config.describe());
    out << "evaluated " << triples << " (pair, algorithm) triple(s); wrote " << all.size()
        << " record(s) to " << opt.out << "\n";
    return 0;
  });
}

// ------------------------------------------------------------- detect-eval

struct DetectEvalOptions {
  std::string manifest;
  std::vector<std::string> detections;
  std::string scenario = "all";
  double iou = 0.5;
  std::string format = "markdown";
  std::string out;  // empty: stdout
  std::vector<std::string> extra_labels;
};

/// Loads ground truth for every annotated entry (optionally one scenario).
inline std::vector<AnnotatedImage> load_ground_truth(const DatasetManifest& m,
                                                     std::optional<Scenario> scenario) {
  std::vector<AnnotatedImage> out;
  for (const auto& e : m.entries) {
    if (!e.annotated) continue;
    if (scenario && e.scenario != *scenario) continue;
    const auto info = read_image_info(m.resolve(e.visible_path));
    out.push_back({e.pair_id, e.scenario,
                   parse_yolo_annotations(m.resolve(*e.annotation_path), info.width, info.height)});
  }
  return out;
}

inline DetectionReport evaluate_detections(const DatasetManifest& m,
                                           const std::vector<DetectionExport>& exports,
                                           std::optional<Scenario> scenario, double iou_threshold,
                                           const std::vector<std::string>& extra_labels = {}) {
  const auto annotated = load_ground_truth(m, scenario);
  if (annotated.empty()) {
    throw Error(ErrorCode::NoAnnotatedImages,
                "no annotated images" +
                    (scenario ? " in scenario " + std::string(to_string(*scenario)) : std::string()));
  }
  const auto merged = merge_exports(exports);
  ClassMapping classes;
  for (const auto& e : exports) classes.labels.insert(e.prompt);
  for (const auto& l : extra_labels) classes.labels.insert(l);

  std::vector<std::pair<std::string, std::string>> methods;  // name, suffix
  auto present = [&](const std::string& suffix) {
    return std::any_of(annotated.begin(), annotated.end(), [&](const AnnotatedImage& a) {
      return merged.count(a.pair_id + suffix) > 0;
    });
  };
  auto add_method = [&](const std::string& name, const std::string& suffix) {
    for (const auto& [n, s] : methods)
      if (s == suffix) return;
    if (present(suffix)) methods.emplace_back(name, suffix);
  };
  add_method("IR", modality_suffix_infrared());
  add_method("RGB", modality_suffix_visible());
  for (const auto& [algo, dir] : m.fused_dirs) add_method(algo, modality_suffix_fused(algo));
  std::set<std::string> discovered;
  for (const auto& [id, dets] : merged) {
    for (const auto& a : annotated) {
      const std::string prefix = a.pair_id + "_fused_";
      if (id.rfind(prefix, 0) == 0 && id.size() > prefix.size()) {
        discovered.insert(id.substr(prefix.size()));
      }
    }
  }
  for (const auto& algo : discovered) add_method(algo, modality_suffix_fused(algo));
  if (methods.empty()) {
    throw Error(ErrorCode::MissingImageEntry, "detections cover none of the annotated images");
  }

  std::vector<std::string> splits;
  std::vector<std::optional<Scenario>> split_filters;
  if (scenario) {
    splits.emplace_back(split_label(*scenario));
    split_filters.push_back(scenario);
  } else {
    splits.emplace_back("All");
    split_filters.push_back(std::nullopt);
    for (Scenario s : kAllScenarios) {
      if (std::any_of(annotated.begin(), annotated.end(),
                      [s](const AnnotatedImage& a) { return a.scenario == s; })) {
        splits.emplace_back(split_label(s));
        split_filters.push_back(s);
      }
    }
  }

  std::vector<std::string> names;
  std::vector<std::vector<std::optional<double>>> values;
  for (const auto& [name, suffix] : methods) {
    const auto records = join_records(annotated, merged, suffix, classes);
    std::vector<std::optional<double>> row;
    for (const auto& f : split_filters) row.push_back(map_at_iou(records, f, iou_threshold).map);
    names.push_back(name);
    values.push_back(std::move(row));
  }
  DetectionReport report = make_detection_report(names, splits, values);
  char iou_text[32];
  std::snprintf(iou_text, sizeof(iou_text), "%g", iou_threshold);
  report.notes["matching"] = std::string("IoU >= ") + iou_text +
                             ", greedy by descending score, one match per ground truth";
  report.notes["ap"] = "all-point interpolated envelope, detections pooled across images";
  std::set<std::string> detector;
  for (const auto& e : exports) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "prompt=\"%s\" text_threshold=%g iou_threshold=%g",
                  e.prompt.c_str(), e.text_threshold, e.iou_threshold);
    detector.insert(buf);
  }
  std::string det_note;
  for (const auto& d : detector) det_note += (det_note.empty() ? "" : "; ") + d;
  report.notes["detector"] = det_note;
  return report;
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  f << text;
}

inline RenderFormat require_format(const std::string& s) {
  auto f = parse_render_format(s);
  if (!f) throw Error(ErrorCode::InvalidArgument, "unknown format '" + s + "'");
  return *f;
}

inline int cmd_detect_eval(const DetectEvalOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RenderFormat format = require_format(opt.format);
    if (!(opt.iou > 0.0 && opt.iou <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "--iou must be in (0, 1]");
    }
    if (opt.detections.empty()) throw Error(ErrorCode::InvalidArgument, "--detections is required");
    const DatasetManifest m = parse_manifest(resolve_manifest_path(opt.manifest));
    std::vector<DetectionExport> exports;
    for (const auto& path : opt.detections) exports.push_back(load_detection_export(path));
    const auto report = evaluate_detections(m, exports, parse_scenario_filter(opt.scenario),
                                            opt.iou, opt.extra_labels);
    write_output(opt.out, render(report, format), out);
    return 0;
  });
}

/// Lists every schema problem in each export; exit 1 if any file has one.
inline int cmd_check_detections(const std::vector<std::string>& paths, std::ostream& out,
                                std::ostream& err) {
  return guarded(err, [&] {
    if (paths.empty()) throw Error(ErrorCode::InvalidArgument, "no export files given");
    bool clean = true;
    for (const auto& path : paths) {
      const auto problems = check_detection_json(parse_json_file(path));
      for (const auto& p : problems) err << path << ": " << p << "\n";
      if (problems.empty()) out << path << ": OK\n";
      clean = clean && problems.empty();
    }
    return clean ? 0 : 1;
  });
}

// ------------------------------------------------------------------- bench

struct BenchOptions {
  std::string manifest;
  std::string command;
  TimingMode mode = TimingMode::Sidecar;
  int warmup = 1;
  int repeats = 1;
  /// Ingest an existing sidecar instead of running a command.
  std::string sidecar;
  std::string algorithm;
  std::string out;  // results store; requires algorithm
  bool overwrite = false;
  std::string scratch_dir;
  /// Where the command writes fused images; default <scratch>/fused. The
  /// manifest's fused directories are never written to implicitly.
  std::string output_dir;
};

inline int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DatasetManifest m = parse_manifest(resolve_manifest_path(opt.manifest));
    if (!opt.out.empty() && opt.algorithm.empty()) {
      throw Error(ErrorCode::InvalidArgument, "--out needs --algo to label the speed records");
    }
    std::set<std::string> known;
    for (const auto& e : m.entries) known.insert(e.pair_id);

    TimingSummary summary;
    if (!opt.sidecar.empty()) {
      summary = ingest_sidecar_file(opt.sidecar, known, opt.warmup);
    } else {
      if (opt.command.empty()) throw Error(ErrorCode::InvalidArgument, "--command is required");
      const std::filesystem::path scratch =
          opt.scratch_dir.empty()
              ? std::filesystem::temp_directory_path() / ("fusionbench_" + std::to_string(::getpid()))
              : std::filesystem::path(opt.scratch_dir);
      std::vector<FusionJob> jobs;
      for (const auto& e : m.entries) {
        if (!e.aligned) {
          err << "warning: pair " << e.pair_id << " is not aligned; skipped\n";
          continue;
        }
        const auto output = (opt.output_dir.empty() ? scratch / "fused"
                                                    : std::filesystem::path(opt.output_dir)) /
                            (e.pair_id + ".png");
        jobs.push_back({e.pair_id, m.resolve(e.visible_path), m.resolve(e.infrared_path), output});
      }
      TimingOptions topt;
      topt.mode = opt.mode;
      topt.warmup_count = opt.warmup;
      topt.repeats = opt.repeats;
      topt.scratch_dir = scratch;
      summary = time_fusion(opt.command, jobs, topt);
    }

    char line[128];
    std::snprintf(line, sizeof(line), "mean %.6f s per pair over %zu run(s)", summary.mean_seconds,
                  summary.count);
    out << "mode " << to_string(summary.mode) << ": " << line
        << (summary.upper_bound ? " (upper bound: includes process start-up and model loading)"
                                : " (fusion call only, excluding model loading and I/O)")
        << "\nhost: " << summary.host << "\n";

    if (!opt.out.empty()) {
      std::map<std::string, std::pair<double, int>> per_pair;
      for (const auto& r : summary.records) {
        if (r.warmup) continue;
        auto& acc = per_pair[r.pair_id];
        acc.first += r.wall_time;
        ++acc.second;
      }
      std::vector<MetricRecord> records;
      for (const auto& e : m.entries) {
        auto it = per_pair.find(e.pair_id);
        if (it == per_pair.end()) continue;
        records.push_back({e.pair_id, e.scenario, opt.algorithm, Metric::Speed,
                           it->second.first / it->second.second, std::nullopt,
                           std::string(to_string(summary.mode)), summary.host});
      }
      ResultsStore store(opt.out);
      store.commit(records, opt.overwrite,
                   {{"speed", std::string("mean seconds per pair, ") +
                                  (summary.upper_bound ? "wall-clock process time (upper bound)"
                                                       : "tool-reported fusion time")}});
      out << "wrote " << records.size() << " speed record(s) to " << opt.out << "\n";
    }
    return 0;
  });
}

// ------------------------------------------------------------------ report

struct ReportOptions {
  std::string results;
  std::string format = "markdown";
  std::string scenario = "all";
  std::string out;
  bool lenient = false;
};

inline int cmd_report(const ReportOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RenderFormat format = require_format(opt.format);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(opt.results, ec)) {
      throw Error(ErrorCode::MissingFile, "results store " + opt.results);
    }
    const ResultsStore store(opt.results);
    if (store.records().empty()) throw Error(ErrorCode::EmptyCell, "results store has no records");
    AggregateOptions aopt;
    aopt.scenario = parse_scenario_filter(opt.scenario);
    aopt.allow_empty = opt.lenient;
    MetricReport report = aggregate(store.records(), aopt);
    if (report.rows.empty()) {
      throw Error(ErrorCode::EmptyCell, "no records for scenario " + opt.scenario);
    }
    for (const auto& [k, v] : store.constants()) report.notes[k] = v;
    write_output(opt.out, render(report, format), out);
    return 0;
  });
}

}  // namespace fusionbench::cli
