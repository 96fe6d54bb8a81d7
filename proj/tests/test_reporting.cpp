#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <sstream>

#include "fusionbench/reporting/render.hpp"
#include "fusionbench/reporting/report.hpp"
#include "fusionbench/reporting/results_store.hpp"

#include "test_util.hpp"

using namespace fusionbench;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvariantViolation;
}

MetricRecord rec(std::string pair, std::string algo, Metric m, double v,
                 Scenario s = Scenario::Daytime) {
  MetricRecord r;
  r.pair_id = std::move(pair);
  r.algorithm = std::move(algo);
  r.metric = m;
  r.value = v;
  r.scenario = s;
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out(1);
  for (char c : s) {
    if (c == sep) {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

int count_of(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + needle.size())) ++n;
  return n;
}

}  // namespace

TEST(Aggregate, MeanAndPopulationStd) {
  const std::vector<MetricRecord> recs = {rec("a", "X", Metric::EN, 7.3),
                                          rec("b", "X", Metric::EN, 7.5),
                                          rec("a", "Y", Metric::EN, 6.0)};
  const auto r = aggregate(recs);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_NEAR(r.rows[0].cells[0].mean, 7.4, 1e-12);
  EXPECT_NEAR(r.rows[0].cells[0].std, 0.1, 1e-12);
  EXPECT_EQ(r.rows[0].cells[1].std, 0.0);
  EXPECT_EQ(r.rows[0].cells[0].rank, 1);
  EXPECT_EQ(r.rows[0].cells[1].rank, 2);
}

TEST(Aggregate, SpeedRanksAscendingAndScenarioFilters) {
  const std::vector<MetricRecord> recs = {rec("a", "Fast", Metric::Speed, 0.01),
                                          rec("a", "Slow", Metric::Speed, 0.5),
                                          rec("n", "Fast", Metric::Speed, 9.0, Scenario::Nighttime)};
  AggregateOptions opt;
  opt.scenario = Scenario::Daytime;
  const auto r = aggregate(recs, opt);
  EXPECT_EQ(r.rows[0].cells[0].rank, 1);
  EXPECT_EQ(r.rows[0].cells[0].mean, 0.01);
}

TEST(Aggregate, EmptyCellsRaiseUnlessAllowed) {
  const std::vector<MetricRecord> recs = {rec("a", "X", Metric::EN, 1), rec("a", "Y", Metric::SD, 2)};
  EXPECT_EQ(code_of([&] { aggregate(recs); }), ErrorCode::EmptyCell);
  AggregateOptions opt;
  opt.allow_empty = true;
  const auto r = aggregate(recs, opt);
  EXPECT_TRUE(r.rows[0].cells[1].empty);
  EXPECT_EQ(r.rows[0].cells[1].rank, 0);
  EXPECT_NE(render(r, RenderFormat::Markdown).find("n/a"), std::string::npos);
}

TEST(Rank, MatchesSortOracle) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<std::optional<double>> v;
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) {
      names.push_back(std::string(1, static_cast<char>('a' + (i * 5) % n)) + std::to_string(i));
      if (rng() % 5 == 0) {
        v.push_back(std::nullopt);
      } else {
        v.push_back(static_cast<double>(rng() % 4));
      }
    }
    const bool higher = trial % 2 == 0;
    const auto r = rank_values(v, names, higher);
    for (int i = 0; i < n; ++i) {
      if (!v[i]) {
        EXPECT_EQ(r.ranks[i], 0);
        continue;
      }
      int better = 0;
      bool tie = false;
      for (int k = 0; k < n; ++k) {
        if (k == i || !v[k]) continue;
        const bool strictly = higher ? *v[k] > *v[i] : *v[k] < *v[i];
        if (strictly || (*v[k] == *v[i] && names[k] < names[i])) ++better;
        if (*v[k] == *v[i]) tie = true;
      }
      EXPECT_EQ(r.ranks[i], better + 1);
      EXPECT_EQ(r.ties[i], tie);
    }
  }
}

TEST(Render, MarkdownSingleCellAndMarkers) {
  const std::vector<MetricRecord> one = {rec("a", "Only", Metric::MI, 2.5)};
  const auto md1 = render(aggregate(one), RenderFormat::Markdown);
  EXPECT_NE(md1.find("| MI ↑ | **2.500 ± 0.000** |"), std::string::npos) << md1;

  const std::vector<MetricRecord> two = {rec("a", "A", Metric::PSNR, 60), rec("a", "B", Metric::PSNR, 61),
                                         rec("a", "A", Metric::SD, 30), rec("a", "B", Metric::SD, 20)};
  const auto report = aggregate(two);
  const auto md = render(report, RenderFormat::Markdown);
  for (const auto& line : lines_of(md)) {
    if (line.rfind("| SD", 0) == 0 || line.rfind("| PSNR", 0) == 0) {
      EXPECT_EQ(count_of(line, "**"), 2) << line;
      EXPECT_EQ(count_of(line, "*") - 2 * count_of(line, "**"), 2) << line;
    }
  }
  EXPECT_EQ(md, render(report, RenderFormat::Markdown));
}

TEST(Render, CsvRoundTripsAtSixDigits) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> val(0, 100);
  std::vector<MetricRecord> recs;
  for (const char* algo : {"Alpha", "Beta", "Gamma"})
    for (Metric m : kQualityMetrics)
      for (int p = 0; p < 3; ++p) recs.push_back(rec("p" + std::to_string(p), algo, m, val(rng)));
  const auto report = aggregate(recs);
  const auto lines = lines_of(render(report, RenderFormat::Csv));
  ASSERT_EQ(lines.size(), 1 + 6 * 3u);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    ASSERT_EQ(f.size(), 9u);
    const auto& cell = report.rows[(i - 1) / 3].cells[(i - 1) % 3];
    EXPECT_NEAR(std::stod(f[3]), cell.mean, std::abs(cell.mean) * 1e-5);
    EXPECT_NEAR(std::stod(f[4]), cell.std, std::abs(cell.std) * 1e-5 + 1e-12);
    EXPECT_EQ(std::stoi(f[6]), cell.rank);
  }
}

TEST(Render, LatexIsStructurallySound) {
  std::vector<MetricRecord> recs;
  int k = 0;
  for (const char* algo : {"A_1", "B", "C", "D", "E", "F"})
    for (Metric m : kQualityMetrics) recs.push_back(rec("p", algo, m, ++k * 1.5));
  const auto tex = render(aggregate(recs), RenderFormat::Latex);
  int depth = 0;
  for (std::size_t i = 0; i < tex.size(); ++i) {
    if (tex[i] == '\\' && i + 1 < tex.size() && (tex[i + 1] == '{' || tex[i + 1] == '}')) {
      ++i;
      continue;
    }
    if (tex[i] == '{') ++depth;
    if (tex[i] == '}') --depth;
    ASSERT_GE(depth, 0);
  }
  EXPECT_EQ(depth, 0);
  EXPECT_EQ(count_of(tex, "\\begin{"), count_of(tex, "\\end{"));
  EXPECT_NE(tex.find("\\begin{tabular}{lcccccc}"), std::string::npos);
  EXPECT_NE(tex.find("A\\_1"), std::string::npos);
  int rows = 0;
  for (const auto& line : lines_of(tex)) {
    if (line.size() < 2 || line.substr(line.size() - 2) != "\\\\") continue;
    ++rows;
    EXPECT_EQ(count_of(line, " & "), 6) << line;
  }
  EXPECT_EQ(rows, 7);
}

TEST(Render, DetectionTableMarksColumns) {
  const auto r = make_detection_report({"IR", "RGB", "Fused"}, {"All", "Day"},
                                       {{0.8, 0.7}, {0.5, std::nullopt}, {0.9, 0.7}});
  EXPECT_EQ(r.ranks[2][0], 1);
  EXPECT_EQ(r.ranks[0][0], 2);
  EXPECT_TRUE(r.ties[0][1] && r.ties[2][1]);
  EXPECT_EQ(r.ranks[1][1], 0);
  const auto md = render(r, RenderFormat::Markdown);
  EXPECT_NE(md.find("†"), std::string::npos);
  EXPECT_EQ(md, render(r, RenderFormat::Markdown));
}

TEST(ResultsStore, CommitReloadAndDuplicates) {
  testutil::TempDir dir;
  const auto path = dir / "results.jsonl";
  {
    ResultsStore store(path);
    auto r = rec("a", "X", Metric::SSIM, 1.5);
    r.components = {{0.75, 0.75}};
    store.commit({r}, false, {{"ssim", "gaussian 11x11"}});
    EXPECT_EQ(code_of([&] { store.commit({rec("a", "X", Metric::SSIM, 1.0)}, false); }),
              ErrorCode::DuplicateRecord);
    EXPECT_EQ(code_of([&] {
                store.commit({rec("b", "X", Metric::EN, 1), rec("b", "X", Metric::EN, 2)}, false);
              }),
              ErrorCode::DuplicateRecord);
    store.commit({rec("b", "X", Metric::EN, 3)}, false);
  }
  const std::string first = testutil::read_text(path);
  EXPECT_LT(first.find("\"kind\":\"header\""), first.find('\n'));
  ResultsStore again(path);
  ASSERT_EQ(again.records().size(), 2u);
  EXPECT_EQ(again.records()[0].components->first, 0.75);
  EXPECT_EQ(again.constants().at("ssim"), "gaussian 11x11");

  again.commit({rec("b", "X", Metric::EN, 4)}, true);
  ResultsStore third(path);
  EXPECT_EQ(third.records().size(), 2u);
  EXPECT_EQ(third.records()[1].value, 4.0);
  const std::string before = testutil::read_text(path);
  third.commit({rec("b", "X", Metric::EN, 4)}, true);
  EXPECT_EQ(testutil::read_text(path), before);
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST(ResultsStore, RejectsCorruptLines) {
  testutil::TempDir dir;
  testutil::write_text(dir / "bad.jsonl", "{\"kind\":\"metric\",\"pair_id\":\"a\"}\n");
  EXPECT_EQ(code_of([&] { ResultsStore s(dir / "bad.jsonl"); }), ErrorCode::SchemaViolation);
  testutil::write_text(dir / "junk.jsonl", "not json\n");
  EXPECT_EQ(code_of([&] { ResultsStore s(dir / "junk.jsonl"); }), ErrorCode::SchemaViolation);
}
