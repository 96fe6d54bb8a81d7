#pragma once

// Table rendering. Best cells are bold (markdown), marked "best" (CSV) or
// \textcolor{red} (LaTeX); second best italic, "second", \textcolor{green}.
// Output is a pure function of the report.

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "fusionbench/core/error.hpp"
#include "fusionbench/reporting/report.hpp"

namespace fusionbench {

enum class RenderFormat { Markdown, Csv, Latex };

inline std::optional<RenderFormat> parse_render_format(std::string_view s) {
  if (s == "markdown" || s == "md") return RenderFormat::Markdown;
  if (s == "csv") return RenderFormat::Csv;
  if (s == "latex" || s == "tex") return RenderFormat::Latex;
  return std::nullopt;
}

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

inline std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string latex_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '_': out += "\\_"; break;
      case '&': out += "\\&"; break;
      case '%': out += "\\%"; break;
      case '#': out += "\\#"; break;
      case '$': out += "\\$"; break;
      case '{': out += "\\{"; break;
      case '}': out += "\\}"; break;
      case '~': out += "\\textasciitilde{}"; break;
      case '^': out += "\\textasciicircum{}"; break;
      case '\\': out += "\\textbackslash{}"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string marker_name(int rank) {
  return rank == 1 ? "best" : rank == 2 ? "second" : "";
}

inline std::string markdown_mark(std::string text, int rank, bool tie) {
  if (rank == 1) text = "**" + text + "**";
  if (rank == 2) text = "*" + text + "*";
  if (tie) text += " †";
  return text;
}

inline std::string latex_mark(std::string text, int rank, bool tie) {
  if (rank == 1) text = "\\textcolor{red}{" + text + "}";
  if (rank == 2) text = "\\textcolor{green}{" + text + "}";
  if (tie) text += "$^\\dagger$";
  return text;
}

inline std::string metric_label(Metric m, bool latex) {
  const std::string name(to_string(m));
  if (latex) return name + (higher_is_better(m) ? " $\\uparrow$" : " $\\downarrow$");
  return name + (higher_is_better(m) ? " ↑" : " ↓");
}

inline std::string cell_value(Metric m, const ReportCell& c, bool latex) {
  if (c.empty) return latex ? "--" : "n/a";
  if (m == Metric::Speed) return fixed(c.mean, 3);
  return fixed(c.mean, 3) + (latex ? "$\\pm$" : " ± ") + fixed(c.std, 3);
}

template <class Grid>
bool any_tie(const Grid& ties) {
  for (const auto& row : ties)
    for (bool t : row)
      if (t) return true;
  return false;
}

inline void markdown_notes(std::ostringstream& out, const std::map<std::string, std::string>& notes,
                           bool tie) {
  out << "\n";
  for (const auto& [k, v] : notes) out << "- " << k << ": `" << v << "`\n";
  if (tie) out << "- †: tied value, rank order broken by name\n";
}

inline void latex_open(std::ostringstream& out, std::string_view caption, std::size_t columns) {
  out << "% requires \\usepackage{booktabs} and \\usepackage{xcolor}\n";
  out << "\\begin{table}[htbp]\n\\centering\n\\caption{" << latex_escape(caption) << "}\n";
  out << "\\begin{tabular}{l" << std::string(columns, 'c') << "}\n\\toprule\n";
}

inline void latex_close(std::ostringstream& out) {
  out << "\\bottomrule\n\\end{tabular}\n\\end{table}\n";
}

}  // namespace detail

inline std::string render(const MetricReport& report, RenderFormat format) {
  std::ostringstream out;
  const std::string scope =
      report.scenario ? std::string(to_string(*report.scenario)) : std::string("all");
  std::vector<std::vector<bool>> ties;
  for (const auto& row : report.rows) {
    ties.emplace_back();
    for (const auto& c : row.cells) ties.back().push_back(c.tie);
  }

  switch (format) {
    case RenderFormat::Markdown: {
      out << "### Fusion metrics (scenario: " << scope << ")\n\n| Metric |";
      for (const auto& a : report.algorithms) out << ' ' << a << " |";
      out << "\n|:--|";
      for (std::size_t i = 0; i < report.algorithms.size(); ++i) out << ":-:|";
      out << '\n';
      for (const auto& row : report.rows) {
        out << "| " << detail::metric_label(row.metric, false) << " |";
        for (const auto& c : row.cells) {
          out << ' '
              << detail::markdown_mark(detail::cell_value(row.metric, c, false), c.rank, c.tie)
              << " |";
        }
        out << '\n';
      }
      detail::markdown_notes(out, report.notes, detail::any_tie(ties));
      break;
    }
    case RenderFormat::Csv: {
      out << "metric,direction,algorithm,mean,std,count,rank,marker,tie\n";
      for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
          const auto& c = row.cells[i];
          out << to_string(row.metric) << ',' << (higher_is_better(row.metric) ? "higher" : "lower")
              << ',' << detail::csv_field(report.algorithms[i]) << ','
              << (c.empty ? "" : detail::sig6(c.mean)) << ','
              << (c.empty ? "" : detail::sig6(c.std)) << ',' << c.count << ',' << c.rank << ','
              << detail::marker_name(c.rank) << ',' << (c.tie ? "yes" : "no") << '\n';
        }
      }
      break;
    }
    case RenderFormat::Latex: {
      detail::latex_open(out, "Fusion metrics (scenario: " + scope + ")", report.algorithms.size());
      out << "\\textbf{Method}";
      for (const auto& a : report.algorithms) out << " & \\textbf{" << detail::latex_escape(a) << '}';
      out << " \\\\\n\\midrule\n";
      for (const auto& row : report.rows) {
        out << detail::metric_label(row.metric, true);
        for (const auto& c : row.cells) {
          out << " & " << detail::latex_mark(detail::cell_value(row.metric, c, true), c.rank, c.tie);
        }
        out << " \\\\\n";
      }
      detail::latex_close(out);
      break;
    }
  }
  return out.str();
}

inline std::string render(const DetectionReport& report, RenderFormat format) {
  std::ostringstream out;
  auto value_text = [](const std::optional<double>& v, bool latex) {
    return v ? detail::fixed(*v, 4) : std::string(latex ? "--" : "n/a");
  };
  switch (format) {
    case RenderFormat::Markdown: {
      out << "### Detection mAP@50\n\n| Method |";
      for (const auto& s : report.splits) out << ' ' << s << " |";
      out << "\n|:--|";
      for (std::size_t i = 0; i < report.splits.size(); ++i) out << ":-:|";
      out << '\n';
      for (std::size_t m = 0; m < report.methods.size(); ++m) {
        out << "| " << report.methods[m] << " |";
        for (std::size_t s = 0; s < report.splits.size(); ++s) {
          out << ' '
              << detail::markdown_mark(value_text(report.values[m][s], false), report.ranks[m][s],
                                       report.ties[m][s])
              << " |";
        }
        out << '\n';
      }
      detail::markdown_notes(out, report.notes, detail::any_tie(report.ties));
      break;
    }
    case RenderFormat::Csv: {
      out << "method,split,map50,rank,marker,tie\n";
      for (std::size_t m = 0; m < report.methods.size(); ++m) {
        for (std::size_t s = 0; s < report.splits.size(); ++s) {
          const auto& v = report.values[m][s];
          out << detail::csv_field(report.methods[m]) << ',' << detail::csv_field(report.splits[s])
              << ',' << (v ? detail::sig6(*v) : "") << ',' << report.ranks[m][s] << ','
              << detail::marker_name(report.ranks[m][s]) << ','
              << (report.ties[m][s] ? "yes" : "no") << '\n';
        }
      }
      break;
    }
    case RenderFormat::Latex: {
      detail::latex_open(out, "Detection performance (mAP@50)", report.splits.size());
      out << "\\textbf{Method}";
      for (const auto& s : report.splits) out << " & \\textbf{" << detail::latex_escape(s) << '}';
      out << " \\\\\n\\midrule\n";
      for (std::size_t m = 0; m < report.methods.size(); ++m) {
        out << detail::latex_escape(report.methods[m]);
        for (std::size_t s = 0; s < report.splits.size(); ++s) {
          out << " & "
              << detail::latex_mark(value_text(report.values[m][s], true), report.ranks[m][s],
                                    report.ties[m][s]);
        }
        out << " \\\\\n";
      }
      detail::latex_close(out);
      break;
    }
  }
  return out.str();
}

}  // namespace fusionbench
