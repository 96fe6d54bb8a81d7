#pragma once

// Dataset manifest: a versioned key/value header followed by an entry table.
//
//   # comment
//   schema_version = 1
//   name = campus
//   fused.DetFusion = fused/DetFusion
//   registration = infrared->visible
//
//   [entries]
//   # pair_id  scenario  visible  infrared  annotation  aligned  annotated
//   day_0001   daytime   vis/day_0001.png  ir/day_0001.png  labels/day_0001.txt  yes  yes
//
// Relative paths resolve against the manifest's directory. Fields are
// whitespace separated, so paths may not contain spaces; "-" marks an
// absent annotation. docs/manifest_format.md has the full grammar.

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/image.hpp"
#include "fusionbench/core/image_io.hpp"

namespace fusionbench {

inline constexpr int kManifestSchemaVersion = 1;

enum class Scenario { Daytime, Nighttime, Smoke, Underpass, Other };

inline constexpr std::array<Scenario, 5> kAllScenarios = {
    Scenario::Daytime, Scenario::Nighttime, Scenario::Smoke, Scenario::Underpass,
    Scenario::Other};

constexpr std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::Daytime: return "daytime";
    case Scenario::Nighttime: return "nighttime";
    case Scenario::Smoke: return "smoke";
    case Scenario::Underpass: return "underpass";
    case Scenario::Other: return "other";
  }
  return "other";
}

/// Short column label used in detection tables.
constexpr std::string_view split_label(Scenario s) noexcept {
  switch (s) {
    case Scenario::Daytime: return "Day";
    case Scenario::Nighttime: return "Night";
    case Scenario::Smoke: return "Smoke";
    case Scenario::Underpass: return "Underpass";
    case Scenario::Other: return "Other";
  }
  return "Other";
}

namespace detail {
inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}
}  // namespace detail

inline std::optional<Scenario> parse_scenario(std::string_view text) {
  const std::string s = detail::lower(text);
  if (s == "daytime" || s == "day") return Scenario::Daytime;
  if (s == "nighttime" || s == "night") return Scenario::Nighttime;
  if (s == "smoke") return Scenario::Smoke;
  if (s == "underpass") return Scenario::Underpass;
  if (s == "other") return Scenario::Other;
  return std::nullopt;
}

struct ManifestEntry {
  std::string pair_id;
  Scenario scenario = Scenario::Other;
  std::string visible_path;
  std::string infrared_path;
  std::optional<std::string> annotation_path;
  bool aligned = false;
  bool annotated = false;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct ScenarioCounts {
  std::size_t pairs = 0;
  std::size_t aligned = 0;
  std::size_t annotated = 0;
  friend bool operator==(const ScenarioCounts&, const ScenarioCounts&) = default;
};

struct DatasetManifest {
  std::string name;
  std::vector<ManifestEntry> entries;
  /// Algorithm name -> fused output directory, in declaration order.
  std::vector<std::pair<std::string, std::string>> fused_dirs;
  /// Free-form registration note, e.g. "infrared->visible" after alignment.
  std::string registration;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& path) const {
    const std::filesystem::path p(path);
    return p.is_absolute() ? p : base_dir / p;
  }

  const ManifestEntry* find(std::string_view pair_id) const {
    for (const auto& e : entries)
      if (e.pair_id == pair_id) return &e;
    return nullptr;
  }

  std::optional<std::string> fused_dir(std::string_view algorithm) const {
    for (const auto& [algo, dir] : fused_dirs)
      if (algo == algorithm) return dir;
    return std::nullopt;
  }

  std::filesystem::path fused_image_path(std::string_view algorithm,
                                         std::string_view pair_id) const {
    auto dir = fused_dir(algorithm);
    if (!dir) {
      throw Error(ErrorCode::InvalidArgument,
                  "manifest declares no fused directory for algorithm " + std::string(algorithm));
    }
    return resolve(*dir) / (std::string(pair_id) + ".png");
  }

  std::map<Scenario, ScenarioCounts> counts() const {
    std::map<Scenario, ScenarioCounts> out;
    for (const auto& e : entries) {
      auto& c = out[e.scenario];
      ++c.pairs;
      c.aligned += e.aligned ? 1 : 0;
      c.annotated += e.annotated ? 1 : 0;
    }
    return out;
  }

  /// Manifest contents without base_dir, which depends on where the file lives.
  bool same_content(const DatasetManifest& o) const {
    return name == o.name && entries == o.entries && fused_dirs == o.fused_dirs &&
           registration == o.registration;
  }
};

/// One finding from validation. `pair_id` is empty for manifest-level issues.
struct Diagnostic {
  ErrorCode code;
  std::string pair_id;
  std::string message;

  std::string str() const {
    std::string out = "error[" + std::string(to_string(code)) + "]";
    if (!pair_id.empty()) out += " pair=" + pair_id;
    return out + ": " + message;
  }
};

namespace detail {

inline Error schema_error(int line, const std::string& what) {
  return Error(ErrorCode::SchemaViolation, "line " + std::to_string(line) + ": " + what);
}

inline bool parse_flag(std::string_view text, int line, std::string_view column) {
  const std::string s = lower(text);
  if (s == "yes" || s == "true" || s == "1") return true;
  if (s == "no" || s == "false" || s == "0") return false;
  throw schema_error(line, "column '" + std::string(column) + "' expects yes/no, got '" +
                               std::string(text) + "'");
}

}  // namespace detail

/// Parses manifest text without touching the filesystem. Throws
/// SchemaViolation or DuplicatePairId.
inline DatasetManifest parse_manifest_text(std::string_view text,
                                           std::filesystem::path base_dir = {}) {
  DatasetManifest m;
  m.base_dir = std::move(base_dir);
  std::optional<int> version;
  bool in_entries = false;
  std::set<std::string> ids;
  std::set<std::string> algos;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line == "[entries]") {
      if (!version) throw detail::schema_error(line_no, "schema_version must precede [entries]");
      in_entries = true;
      continue;
    }

    if (!in_entries) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw detail::schema_error(line_no, "expected 'key = value'");
      }
      const std::string key(detail::trim(line.substr(0, eq)));
      const std::string value(detail::trim(line.substr(eq + 1)));
      if (key == "schema_version") {
        int v = 0;
        try {
          std::size_t used = 0;
          v = std::stoi(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          throw detail::schema_error(line_no, "schema_version must be an integer");
        }
        if (v != kManifestSchemaVersion) {
          throw detail::schema_error(line_no, "unsupported schema_version " + value);
        }
        version = v;
      } else if (!version) {
        throw detail::schema_error(line_no, "schema_version must be the first key");
      } else if (key == "name") {
        m.name = value;
      } else if (key == "registration") {
        m.registration = value;
      } else if (key.rfind("fused.", 0) == 0) {
        const std::string algo = key.substr(6);
        if (!detail::is_identifier(algo)) {
          throw detail::schema_error(line_no, "invalid algorithm name '" + algo + "'");
        }
        if (value.empty()) throw detail::schema_error(line_no, "empty fused directory");
        if (!algos.insert(algo).second) {
          throw detail::schema_error(line_no, "duplicate fused directory for " + algo);
        }
        m.fused_dirs.emplace_back(algo, value);
      } else {
        throw detail::schema_error(line_no, "unknown key '" + key + "'");
      }
      continue;
    }

    std::istringstream fields{std::string(line)};
    std::vector<std::string> cols;
    for (std::string f; fields >> f;) cols.push_back(f);
    if (cols.size() != 7) {
      throw detail::schema_error(line_no, "entry needs 7 columns, found " +
                                              std::to_string(cols.size()));
    }
    ManifestEntry e;
    e.pair_id = cols[0];
    if (!detail::is_identifier(e.pair_id)) {
      throw detail::schema_error(line_no, "invalid pair_id '" + e.pair_id + "'");
    }
    auto scenario = parse_scenario(cols[1]);
    if (!scenario) throw detail::schema_error(line_no, "unknown scenario '" + cols[1] + "'");
    e.scenario = *scenario;
    e.visible_path = cols[2];
    e.infrared_path = cols[3];
    if (cols[4] != "-") e.annotation_path = cols[4];
    e.aligned = detail::parse_flag(cols[5], line_no, "aligned");
    e.annotated = detail::parse_flag(cols[6], line_no, "annotated");
    if (!ids.insert(e.pair_id).second) {
      throw Error(ErrorCode::DuplicatePairId,
                  "line " + std::to_string(line_no) + ": pair_id " + e.pair_id);
    }
    m.entries.push_back(std::move(e));
  }
  if (!version) throw detail::schema_error(line_no, "missing schema_version");
  return m;
}

/// Every referenced file that does not exist, one diagnostic each.
inline std::vector<Diagnostic> find_dangling_paths(const DatasetManifest& m) {
  std::vector<Diagnostic> out;
  auto check = [&](const ManifestEntry& e, const std::string& path, std::string_view role) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(m.resolve(path), ec)) {
      out.push_back({ErrorCode::DanglingPath, e.pair_id,
                     std::string(role) + " file not found: " + path});
    }
  };
  for (const auto& e : m.entries) {
    check(e, e.visible_path, "visible");
    check(e, e.infrared_path, "infrared");
    if (e.annotated && !e.annotation_path) {
      out.push_back({ErrorCode::DanglingPath, e.pair_id,
                     "annotated entry without annotation path"});
    } else if (e.annotation_path) {
      check(e, *e.annotation_path, "annotation");
    }
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw Error(ErrorCode::MissingFile, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline DatasetManifest load_manifest_unchecked(const std::filesystem::path& path) {
  return parse_manifest_text(read_text_file(path), path.parent_path());
}

/// Reads and validates a manifest: schema, unique ids, and that every
/// referenced file exists (DanglingPath on the first missing one).
inline DatasetManifest parse_manifest(const std::filesystem::path& path) {
  DatasetManifest m = load_manifest_unchecked(path);
  const auto dangling = find_dangling_paths(m);
  if (!dangling.empty()) {
    const auto& d = dangling.front();
    throw Error(d.code, "pair " + d.pair_id + ": " + d.message);
  }
  return m;
}

inline std::string serialize_manifest(const DatasetManifest& m) {
  std::ostringstream out;
  out << "schema_version = " << kManifestSchemaVersion << "\n";
  if (!m.name.empty()) out << "name = " << m.name << "\n";
  for (const auto& [algo, dir] : m.fused_dirs) out << "fused." << algo << " = " << dir << "\n";
  if (!m.registration.empty()) out << "registration = " << m.registration << "\n";
  out << "\n[entries]\n# pair_id scenario visible infrared annotation aligned annotated\n";
  for (const auto& e : m.entries) {
    out << e.pair_id << ' ' << to_string(e.scenario) << ' ' << e.visible_path << ' '
        << e.infrared_path << ' ' << e.annotation_path.value_or("-") << ' '
        << (e.aligned ? "yes" : "no") << ' ' << (e.annotated ? "yes" : "no") << "\n";
  }
  return out.str();
}

/// A loaded visible/infrared pair. Both rasters share dimensions.
struct ImagePair {
  ColorImage visible;
  GrayImage infrared;
  std::string pair_id;
  Scenario scenario = Scenario::Other;

  ImagePair(ColorImage vis, GrayImage ir, std::string id, Scenario sc)
      : visible(std::move(vis)), infrared(std::move(ir)), pair_id(std::move(id)), scenario(sc) {
    require_same_size("pair " + pair_id + " visible/infrared", visible, infrared);
  }
};

inline ImagePair load_pair(const DatasetManifest& m, const ManifestEntry& e) {
  return ImagePair(load_color(m.resolve(e.visible_path)), load_gray(m.resolve(e.infrared_path)),
                   e.pair_id, e.scenario);
}

}  // namespace fusionbench
