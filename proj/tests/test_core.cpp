#include <gtest/gtest.h>

#include <random>

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/histogram.hpp"
#include "fusionbench/core/image.hpp"
#include "fusionbench/core/image_io.hpp"
#include "fusionbench/core/manifest.hpp"

#include "test_util.hpp"

using namespace fusionbench;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvariantViolation;
}

std::string entry_line(const std::string& id, const std::string& scenario, bool annotated) {
  return id + " " + scenario + " v/" + id + ".png i/" + id + ".png " +
         (annotated ? "l/" + id + ".txt" : std::string("-")) + " yes " +
         (annotated ? "yes" : "no") + "\n";
}

}  // namespace

TEST(Image, RejectsNonPositiveDimensionsAndWrongBuffer) {
  EXPECT_EQ(code_of([] { GrayImage(0, 4); }), ErrorCode::InvalidImage);
  EXPECT_EQ(code_of([] { GrayImage(3, 3, std::vector<std::uint8_t>(8)); }),
            ErrorCode::InvalidImage);
  EXPECT_EQ(code_of([] { ColorImage(2, 2, std::vector<std::uint8_t>(4)); }),
            ErrorCode::InvalidImage);
  ColorImage c(2, 2, std::vector<std::uint8_t>(12, 7));
  EXPECT_EQ(c.sample_count(), 12u);
}

TEST(Grayscale, Bt601Examples) {
  ColorImage img(3, 1);
  img.at(0, 0, 0) = img.at(0, 0, 1) = img.at(0, 0, 2) = 255;
  img.at(1, 0, 0) = 255;
  img.at(2, 0, 0) = img.at(2, 0, 1) = img.at(2, 0, 2) = 10;
  const GrayImage g = to_grayscale(img);
  EXPECT_EQ(g.at(0, 0), 255);
  EXPECT_EQ(g.at(1, 0), 76);
  EXPECT_EQ(g.at(2, 0), 10);
}

TEST(Grayscale, IdempotentOnGrayInputs) {
  for (int v = 0; v < 256; ++v) {
    EXPECT_EQ(luma(v, v, v), v);
  }
}

TEST(Histogram, DegenerateAndTwoPixel) {
  const auto h0 = histogram(GrayImage(4, 4, 0));
  EXPECT_EQ(h0[0], 1.0);
  for (int i = 1; i < 256; ++i) EXPECT_EQ(h0[i], 0.0);

  GrayImage two(2, 1);
  two.at(1, 0) = 255;
  const auto h = histogram(two);
  EXPECT_EQ(h[0], 0.5);
  EXPECT_EQ(h[255], 0.5);
}

TEST(Histogram, MatchesCountingOracleAndSumsToOne) {
  std::mt19937 rng(7);
  GrayImage img(16, 16);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() % 256);
  const auto h = histogram(img);
  double sum = 0;
  for (int level = 0; level < 256; ++level) {
    int count = 0;
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) count += img.at(x, y) == level;
    EXPECT_EQ(h[level], count / 256.0);
    sum += h[level];
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(JointHistogram, Examples) {
  const auto j = joint_histogram(GrayImage(3, 3, 5), GrayImage(3, 3, 5));
  EXPECT_EQ(j(5, 5), 1.0);

  GrayImage a(2, 1, 0), b(2, 1, 0);
  b.at(1, 0) = 255;
  const auto jab = joint_histogram(a, b);
  EXPECT_EQ(jab(0, 0), 0.5);
  EXPECT_EQ(jab(0, 255), 0.5);
  EXPECT_EQ(code_of([] { joint_histogram(GrayImage(2, 2), GrayImage(2, 3)); }),
            ErrorCode::DimensionMismatch);
}

TEST(JointHistogram, MatchesPairCountAndMarginals) {
  std::mt19937 rng(11);
  GrayImage a(8, 8), b(8, 8);
  for (auto& v : a.data()) v = static_cast<std::uint8_t>(rng() % 6);
  for (auto& v : b.data()) v = static_cast<std::uint8_t>(rng() % 6);
  const auto j = joint_histogram(a, b);
  for (int i = 0; i < 6; ++i) {
    for (int k = 0; k < 6; ++k) {
      int count = 0;
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) count += a.at(x, y) == i && b.at(x, y) == k;
      EXPECT_EQ(j(i, k), count / 64.0);
    }
  }
  const auto ma = j.marginal_a(), mb = j.marginal_b();
  const auto ha = histogram(a), hb = histogram(b);
  for (int i = 0; i < 256; ++i) {
    EXPECT_NEAR(ma[i], ha[i], 1e-9);
    EXPECT_NEAR(mb[i], hb[i], 1e-9);
  }
}

TEST(ImageIo, RoundTripsGrayAndColorPng) {
  testutil::TempDir dir;
  ColorImage c(5, 3);
  for (std::size_t i = 0; i < c.sample_count(); ++i) c.data()[i] = static_cast<std::uint8_t>(i * 13);
  save_png(c, dir / "c.png");
  const auto loaded = load_image(dir / "c.png");
  ASSERT_TRUE(std::holds_alternative<ColorImage>(loaded));
  EXPECT_EQ(std::get<ColorImage>(loaded), c);

  GrayImage one(1, 1, 0);
  save_png(one, dir / "one.png");
  const auto g = load_image(dir / "one.png");
  ASSERT_TRUE(std::holds_alternative<GrayImage>(g));
  EXPECT_EQ(std::get<GrayImage>(g).width(), 1);
  EXPECT_EQ(std::get<GrayImage>(g).data()[0], 0);

  const auto info = read_image_info(dir / "c.png");
  EXPECT_EQ(info.width, 5);
  EXPECT_EQ(info.height, 3);
  EXPECT_EQ(info.channels, 3);
}

TEST(ImageIo, ReportsHeaderDimensions) {
  testutil::TempDir dir;
  save_png(ColorImage(640, 512), dir / "frame.png");
  const auto img = load_color(dir / "frame.png");
  EXPECT_EQ(img.width(), 640);
  EXPECT_EQ(img.height(), 512);
}

TEST(ImageIo, ErrorPaths) {
  testutil::TempDir dir;
  EXPECT_EQ(code_of([&] { load_image(dir / "absent.png"); }), ErrorCode::MissingFile);
  testutil::write_text(dir / "text.png", "definitely not an image");
  EXPECT_EQ(code_of([&] { load_image(dir / "text.png"); }), ErrorCode::UnsupportedFormat);

  GrayImage g(32, 32, 9);
  save_png(g, dir / "full.png");
  const std::string bytes = testutil::read_text(dir / "full.png");
  testutil::write_text(dir / "cut.png", bytes.substr(0, bytes.size() / 2));
  EXPECT_EQ(code_of([&] { load_image(dir / "cut.png"); }), ErrorCode::CorruptData);

  testutil::write_text(dir / "cut.jpg", std::string("\xFF\xD8\xFF\xE0\x00\x10JFIF", 10));
  EXPECT_EQ(code_of([&] { load_image(dir / "cut.jpg"); }), ErrorCode::CorruptData);
}

TEST(Manifest, CountsPerScenario) {
  std::string text = "schema_version = 1\nname = campus\n[entries]\n";
  for (int i = 0; i < 159; ++i) text += entry_line("d" + std::to_string(i), "daytime", true);
  for (int i = 0; i < 80; ++i) text += entry_line("n" + std::to_string(i), "nighttime", true);
  const auto m = parse_manifest_text(text);
  const auto counts = m.counts();
  EXPECT_EQ(counts.at(Scenario::Daytime).annotated, 159u);
  EXPECT_EQ(counts.at(Scenario::Nighttime).annotated, 80u);
  EXPECT_EQ(counts.size(), 2u);
}

TEST(Manifest, EmptyEntriesIsValid) {
  const auto m = parse_manifest_text("schema_version = 1\n\n[entries]\n");
  EXPECT_TRUE(m.entries.empty());
  EXPECT_TRUE(m.counts().empty());
}

TEST(Manifest, RejectsDuplicatesAndSchemaProblems) {
  const std::string head = "schema_version = 1\n[entries]\n";
  EXPECT_EQ(code_of([&] {
              parse_manifest_text(head + entry_line("a", "daytime", false) +
                                  entry_line("a", "nighttime", false));
            }),
            ErrorCode::DuplicatePairId);
  EXPECT_EQ(code_of([] { parse_manifest_text("name = x\n"); }), ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([] { parse_manifest_text("schema_version = 2\n"); }),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([&] { parse_manifest_text(head + "a daytime v i - yes\n"); }),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([&] { parse_manifest_text(head + "a dusk v i - yes no\n"); }),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([&] { parse_manifest_text(head + "a day v i - maybe no\n"); }),
            ErrorCode::SchemaViolation);
}

TEST(Manifest, RoundTripsThroughSerialize) {
  std::mt19937 rng(3);
  const char* scen[] = {"daytime", "nighttime", "smoke", "underpass", "other"};
  for (int trial = 0; trial < 20; ++trial) {
    std::string text = "schema_version = 1\nname = set" + std::to_string(trial) +
                       "\nfused.Alpha = out/alpha\nfused.Beta_2 = /abs/beta\n"
                       "registration = infrared->visible\n[entries]\n";
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      text += entry_line("p" + std::to_string(i), scen[rng() % 5], rng() % 2 == 0);
    }
    const auto m = parse_manifest_text(text, "/base");
    const auto again = parse_manifest_text(serialize_manifest(m), "/elsewhere");
    EXPECT_TRUE(m.same_content(again)) << serialize_manifest(m);
  }
}

TEST(Manifest, ResolvesRelativeToFileAndFindsDanglingPaths) {
  testutil::TempDir dir;
  save_png(GrayImage(4, 4), dir / "v" / "a.png");
  save_png(GrayImage(4, 4), dir / "i" / "a.png");
  testutil::write_text(dir / "manifest.txt",
                       "schema_version = 1\n[entries]\n"
                       "a daytime v/a.png i/a.png - yes no\n"
                       "b daytime v/a.png i/a.png l/b.txt yes yes\n");
  EXPECT_EQ(code_of([&] { parse_manifest(dir / "manifest.txt"); }), ErrorCode::DanglingPath);
  const auto m = load_manifest_unchecked(dir / "manifest.txt");
  const auto dangling = find_dangling_paths(m);
  ASSERT_EQ(dangling.size(), 1u);
  EXPECT_EQ(dangling[0].pair_id, "b");
  EXPECT_EQ(m.resolve("v/a.png"), dir / "v/a.png");
}

TEST(ImagePair, RequiresEqualSizes) {
  EXPECT_EQ(code_of([] { ImagePair(ColorImage(4, 4), GrayImage(4, 5), "p", Scenario::Other); }),
            ErrorCode::DimensionMismatch);
}

TEST(ErrorCodes, MapToExitStatus) {
  EXPECT_EQ(exit_code_for(ErrorCode::SchemaViolation), 1);
  EXPECT_EQ(exit_code_for(ErrorCode::MissingFusedImage), 1);
  EXPECT_EQ(exit_code_for(ErrorCode::MissingFile), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::CorruptData), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::InvariantViolation), 3);
}
