#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "mbqc/gadgets.hpp"
#include "mbqc/io.hpp"

namespace mbqc::io {
namespace {

TEST(PatternJson, RoundTripsEveryGadget) {
  for (const char* name : {"H", "X", "Z", "T", "RZ", "CZ"}) {
    const auto g = gadget(name, Angle::radians(1.25));
    const auto j = pattern_to_json(g.graph, g.pattern);
    const auto back = pattern_from_json(json::parse(j.dump()));
    EXPECT_EQ(back.graph.node_count(), g.graph.node_count()) << name;
    EXPECT_TRUE(std::equal(back.graph.edges().begin(), back.graph.edges().end(), g.graph.edges().begin(),
                           g.graph.edges().end()));
    EXPECT_EQ(back.pattern.corrections, g.pattern.corrections) << name;
    EXPECT_EQ(back.pattern.order, g.pattern.order) << name;
    for (auto node : g.pattern.order) EXPECT_EQ(back.pattern.angle(node), g.pattern.angle(node)) << name;
    EXPECT_EQ(pattern_to_json(back.graph, back.pattern), j) << name;
  }
}

TEST(PatternJson, OctantsStayExact) {
  const auto g = t_gadget();
  const auto j = pattern_to_json(g.graph, g.pattern);
  EXPECT_EQ(j["angles"]["0"], (json{{"octants", 7}}));
  EXPECT_TRUE(pattern_from_json(j).pattern.angle(0).is_octant());
}

TEST(PatternJson, RejectsInvalidFiles) {
  const auto good = pattern_to_json(x_gadget().graph, x_gadget().pattern);
  auto missing = good;
  missing.erase("edges");
  EXPECT_THROW(pattern_from_json(missing), StructureError);
  auto bad_edge = good;
  bad_edge["edges"].push_back({0, 7});
  EXPECT_THROW(pattern_from_json(bad_edge), StructureError);
  auto late_dependency = good;
  late_dependency["sx"]["0"] = {1};
  EXPECT_THROW(pattern_from_json(late_dependency), StructureError);
  auto output_angle = good;
  output_angle["angles"]["2"] = {{"octants", 1}};
  EXPECT_THROW(pattern_from_json(output_angle), StructureError);
  auto bad_angle = good;
  bad_angle["angles"]["0"] = {{"degrees", 90}};
  EXPECT_THROW(pattern_from_json(bad_angle), StructureError);
  auto bad_key = good;
  bad_key["angles"]["x"] = {{"octants", 1}};
  EXPECT_THROW(pattern_from_json(bad_key), StructureError);
  auto wrong_type = good;
  wrong_type["nodes"] = "three";
  EXPECT_THROW(pattern_from_json(wrong_type), StructureError);
}

TEST(PatternJson, LoadFromDisk) {
  const auto path = std::filesystem::temp_directory_path() / "mbqc_io_test_pattern.json";
  {
    std::ofstream out(path);
    out << pattern_to_json(cz_gadget().graph, cz_gadget().pattern).dump(2);
  }
  EXPECT_EQ(load_pattern(path.string()).graph.node_count(), 6u);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_THROW(load_pattern(path.string()), StructureError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_pattern(path.string()), UsageError);
}

TEST(HistogramJson, CountsSumToShots) {
  const auto h = grover::run(grover::Oracle::parse("11"), 100, 4);
  const auto j = histogram_to_json(h);
  std::size_t total = 0;
  for (const auto& [bits, n] : j["counts"].items()) total += n.get<std::size_t>();
  EXPECT_EQ(total, j["shots"].get<std::size_t>());
  EXPECT_EQ(j["oracle"], "11");
  EXPECT_EQ(j["seed"], 4);
  EXPECT_EQ(j.dump(), histogram_to_json(grover::run(grover::Oracle::parse("11"), 100, 4)).dump());
}

TEST(TranscriptJson, ServerViewHasNoSecrets) {
  const auto result = ubqc::run(grover::Oracle::parse("00"), 4, 8);
  for (const auto& t : result.transcripts) {
    const auto full = transcript_to_json(t);
    EXPECT_TRUE(contains_secret_key(full));
    const auto view = server_view(full);
    EXPECT_FALSE(contains_secret_key(view));
    EXPECT_EQ(view["rounds"].size(), 16u);
    EXPECT_EQ(view["outputs"].size(), 2u);
    const std::string text = view.dump();
    for (const char* word : {"theta", "\"r\"", "phi", "unmasked", "oracle"}) {
      EXPECT_EQ(text.find(word), std::string::npos) << word;
    }
    EXPECT_EQ(full["client_secrets"]["theta_octants"].size(), grover::kNodes);
  }
  EXPECT_FALSE(contains_secret_key(histogram_to_json(result.server)));
}

TEST(Histogram, TextIsSortedAndFixedWidth) {
  ShotHistogram h;
  h.width = 2;
  h.add("01", 3);
  h.add("10", 5);
  h.add("00", 3);
  std::ostringstream out;
  h.write_text(out);
  EXPECT_EQ(out.str(), "  10         5  0.4545\n  00         3  0.2727\n  01         3  0.2727\n");
  EXPECT_THROW(h.add("1"), SizeError);
  EXPECT_EQ(h.dense_counts(), (std::vector<std::size_t>{3, 3, 5, 0}));
}

TEST(ChiSquare, KnownValues) {
  const std::vector<std::size_t> flat{1024, 1024, 1024, 1024};
  EXPECT_NEAR(chi_square_uniform(flat).p_value, 1.0, 1e-12);
  const std::vector<std::size_t> skew{4096, 0, 0, 0};
  EXPECT_LT(chi_square_uniform(skew).p_value, 1e-12);
  const auto c = chi_square_uniform(std::vector<std::size_t>{10, 20, 30, 40});
  EXPECT_NEAR(c.statistic, 20.0, 1e-12);
  EXPECT_EQ(c.dof, 3u);
  EXPECT_NEAR(c.p_value, 1.6974243555282632e-4, 1e-12);
}

}  // namespace
}  // namespace mbqc::io
