#include "jumpcompare/gallery.hpp"
#include "jumpcompare/scenario.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace jc = jumpcompare;

namespace {

const char* kMinimal = R"({
  "id": "minimal",
  "kind": "vector",
  "m": 1,
  "d": 1,
  "horizon": {"t0": 0.0, "T": 1.0},
  "marks": {"dimension": 1, "atoms": [{"mark": [1.0], "weight": 1.0}]},
  "model1": {"c": [0.5], "U": [[0.2]]},
  "model2": {"U": [[0.2]]},
  "initial": {"x1": [1.0], "x2": [0.0]}
})";

jc::Json minimal() { return jc::Json::parse(kMinimal); }

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST(ParseConfig, MinimalVectorScenario) {
  const auto config = jc::parse_config_text(kMinimal);
  EXPECT_EQ(config.id, "minimal");
  EXPECT_EQ(config.kind, jc::ScenarioKind::Vector);
  EXPECT_EQ(config.marks.size(), 1u);
  EXPECT_EQ(config.vector1.affine.c[0], 0.5);
  EXPECT_EQ(config.vector2.affine.c[0], 0.0);
  EXPECT_EQ(config.vector1.affine.G.size(), 1u);
  EXPECT_EQ(config.mc.paths, 10000u);
  EXPECT_EQ(config.mc.step, 1.0 / 512.0);
  EXPECT_EQ(config.check.box, 2.0);

  const auto p = config.vector_problem();
  EXPECT_EQ(p.x1[0], 1.0);
  EXPECT_EQ(p.sampling.ladder, jc::default_ladder(2.0));
  EXPECT_FALSE(p.tolerances.eps_check.has_value());
}

TEST(ParseConfig, FromAFile) {
  const auto path = temp_file("jumpcompare_minimal.json", kMinimal);
  EXPECT_EQ(jc::parse_config(path), jc::parse_config_text(kMinimal));
  std::filesystem::remove(path);
  EXPECT_THROW(jc::parse_config(path), std::runtime_error);
}

TEST(ParseConfig, UnorderedStartsRaiseOrderError) {
  auto doc = minimal();
  doc["initial"]["x1"] = {-1.0};
  EXPECT_THROW(jc::from_json(doc), jc::OrderError);
}

TEST(ParseConfig, NegativeWeightIsASchemaError) {
  auto doc = minimal();
  doc["marks"]["atoms"][0]["weight"] = -1.0;
  try {
    jc::from_json(doc);
    FAIL() << "expected SchemaError";
  } catch (const jc::SchemaError& e) {
    EXPECT_NE(e.pointer().find("/marks"), std::string::npos) << e.pointer();
  }
}

TEST(ParseConfig, UnknownKeysAreRejectedWithTheirLocation) {
  const std::string text = R"({
  "id": "x",
  "kind": "vector",
  "m": 1,
  "d": 1,
  "model1": {"c": [0.5], "typo": 3},
  "model2": {},
  "initial": {"x1": [1.0], "x2": [0.0]}
})";
  try {
    jc::parse_config_text(text);
    FAIL() << "expected SchemaError";
  } catch (const jc::SchemaError& e) {
    EXPECT_EQ(e.pointer(), "/model1/typo");
    ASSERT_TRUE(e.line().has_value());
    EXPECT_EQ(*e.line(), 6u);
  }
}

TEST(ParseConfig, DimensionMismatchIsASchemaError) {
  auto doc = minimal();
  doc["model1"]["c"] = {0.5, 0.1};
  EXPECT_THROW(jc::from_json(doc), jc::SchemaError);
  auto wrong_type = minimal();
  wrong_type["m"] = "one";
  EXPECT_THROW(jc::from_json(wrong_type), jc::SchemaError);
}

TEST(ParseConfig, SyntaxErrorsReportALine) {
  try {
    jc::parse_config_text("{\n  \"id\": \"x\",\n  \"m\": ,\n}");
    FAIL() << "expected ParseError";
  } catch (const jc::ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(ParseConfig, EveryGalleryScenarioRoundTrips) {
  for (const auto& entry : jc::gallery()) {
    const std::string text = jc::serialize(entry.config);
    const auto back = jc::parse_config_text(text);
    EXPECT_EQ(back, entry.config) << entry.config.id;
    EXPECT_EQ(jc::serialize(back), text) << entry.config.id;
  }
}

TEST(ParseConfig, MatrixScenarioRoundTripsWithOverrides) {
  auto config = jc::find_gallery("matrix-pass")->config;
  config.mc.eps_path = 0.01;
  config.check.eps_check = 1e-7;
  config.check.cstar = 9.0;
  config.check.ladder = std::vector<double>{0.5, 1.0};
  const auto back = jc::parse_config_text(jc::serialize(config));
  EXPECT_EQ(back, config);
  const auto p = back.matrix_problem();
  EXPECT_EQ(p.cstar_override, 9.0);
  EXPECT_EQ(p.sampling.ladder, (std::vector<double>{0.5, 1.0}));
}

TEST(ParseConfig, MatrixStartsMustBeOrderedInThePsdSense) {
  auto doc = jc::to_json(jc::find_gallery("matrix-pass")->config);
  doc["initial"]["x1"] = {{1.0, 2.0}, {2.0, 1.0}};
  EXPECT_THROW(jc::from_json(doc), jc::OrderError);
}

TEST(Gallery, HasTheDocumentedScenarios) {
  EXPECT_EQ(jc::gallery().size(), 10u);
  for (const char* id : {"corollary33-pass", "corollary34-pass", "corollary35-pass", "example36", "jump-monotone-fail",
                         "drift-order-fail", "sigma-gap-fail", "sigma-coupling-fail", "matrix-pass",
                         "matrix-drift-fail"}) {
    EXPECT_TRUE(jc::find_gallery(id).has_value()) << id;
  }
  EXPECT_EQ(jc::find_gallery("drift-violation")->config.id, "drift-order-fail");
  EXPECT_FALSE(jc::find_gallery("nope").has_value());
}
