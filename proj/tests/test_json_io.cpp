#include <gtest/gtest.h>

#include <sstream>

#include "buyback/generator.hpp"
#include "buyback/json_io.hpp"

using namespace buyback;

namespace {

std::string input_error_of(const std::string& text) {
  try {
    instance_from_json(parse_json_text(text));
  } catch (const InputError& ex) {
    return ex.what();
  }
  return "";
}

}  // namespace

TEST(JsonInstance, RoundTripsEveryKind) {
  for (InstanceKind kind : {InstanceKind::BipartiteMatching, InstanceKind::Mixed, InstanceKind::GraphicIntersection,
                            InstanceKind::Uniform, InstanceKind::FreeDisposal}) {
    GeneratorConfig cfg;
    cfg.kind = kind;
    cfg.seed = 3;
    cfg.r = Weight(Rational(17, 10));
    const Instance a = gen(cfg);
    const std::string text = dump_json(instance_to_json(a));
    const Instance b = instance_from_json(parse_json_text(text));
    EXPECT_EQ(text, dump_json(instance_to_json(b))) << to_string(kind);
    EXPECT_EQ(b.arrival_order, a.arrival_order);
    ASSERT_TRUE(b.threshold_r);
    EXPECT_EQ(b.threshold_r->value(), Rational(17, 10));
  }
}

TEST(JsonInstance, StarFamilyRoundTrips) {
  GeneratorConfig cfg;
  cfg.kind = InstanceKind::Star;
  cfg.k = 1;
  cfg.n = 4;
  const Instance a = gen(cfg);
  const Instance b = instance_from_json(instance_to_json(a));
  EXPECT_EQ(dump_json(instance_to_json(a)), dump_json(instance_to_json(b)));
}

TEST(JsonInstance, OptimalThresholdAndDefaultOrder) {
  const Instance inst = instance_from_json(parse_json_text(
      R"({"r":"optimal","elements":[{"id":4,"weight":"1/2"},{"id":2,"weight":3}],
          "matroids":[{"type":"uniform","rank":1}]})"));
  EXPECT_FALSE(inst.threshold_r);
  EXPECT_EQ(inst.arrival_order, (std::vector<ElementId>{4, 2}));
  EXPECT_EQ(inst.elements[1].weight.value(), Rational(3));
}

TEST(JsonInstance, DecimalWeightsAreExact) {
  const Instance inst = instance_from_json(parse_json_text(
      R"({"elements":[{"id":0,"weight":0.1}],"matroids":[{"type":"uniform","rank":1}]})"));
  EXPECT_EQ(inst.elements[0].weight.value(), Rational(1, 10));
}

TEST(JsonErrors, SyntaxErrorsCarryAPosition) {
  std::istringstream in("{\"k\": 1,\n \"elements\": [ {\"id\": 0 \"weight\": 1} ]}");
  try {
    read_json_stream(in, "stdin");
    FAIL() << "expected an InputError";
  } catch (const InputError& ex) {
    const std::string msg = ex.what();
    EXPECT_NE(msg.find("stdin"), std::string::npos);
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  }
}

TEST(JsonErrors, StructuralErrorsNameThePath) {
  EXPECT_NE(input_error_of(R"({"matroids":[{"type":"uniform","rank":1}]})").find("missing field 'elements'"),
            std::string::npos);
  EXPECT_NE(input_error_of(R"({"elements":[{"id":0,"weight":"-1/2"}],"matroids":[{"type":"uniform","rank":1}]})")
                .find("elements[0].weight"),
            std::string::npos);
  EXPECT_NE(input_error_of(R"({"elements":[{"id":0,"weight":"1/0"}],"matroids":[{"type":"uniform","rank":1}]})")
                .find("elements[0].weight"),
            std::string::npos);
  EXPECT_NE(input_error_of(R"({"elements":[],"matroids":[{"type":"matroid-of-doom"}]})").find("matroids[0]"),
            std::string::npos);
  EXPECT_NE(input_error_of(R"({"k":2,"elements":[],"matroids":[{"type":"uniform","rank":1}]})").find("k:"),
            std::string::npos);
  EXPECT_NE(input_error_of(R"({"elements":[{"id":0,"weight":1},{"id":0,"weight":2}],
                               "matroids":[{"type":"uniform","rank":1}]})")
                .find("duplicate"),
            std::string::npos);
  EXPECT_FALSE(input_error_of(R"([1,2])").empty());
}

TEST(Float17, SeventeenSignificantDigits) {
  Json j;
  j["c"] = float17(3 + 2 * std::sqrt(2.0));
  j["one"] = float17(1.0);
  j["nan"] = float17(std::nan(""));
  const std::string out = dump_json(j, -1);
  EXPECT_EQ(out, R"({"c":5.8284271247461898,"one":1,"nan":null})");
  // the printed text parses back to the same double
  EXPECT_EQ(Json::parse(out)["c"].get<double>(), 3 + 2 * std::sqrt(2.0));
}

TEST(Float17, OrdinaryStringsAreUntouched) {
  Json j;
  j["s"] = "f17:1.5";
  EXPECT_EQ(dump_json(j, -1), R"({"s":"f17:1.5"})");
}

TEST(GeneratorConfigJson, RoundTrip) {
  GeneratorConfig c;
  c.kind = InstanceKind::FreeDisposal;
  c.seed = 11;
  c.n = 5;
  c.advertisers = 3;
  c.capacities = {1, 2, 1};
  c.r = Weight(2);
  c.order = ArrivalOrder::Descending;
  const Json j = generator_config_to_json(c);
  const GeneratorConfig d = generator_config_from_json(j, "cfg");
  EXPECT_EQ(dump_json(generator_config_to_json(d)), dump_json(j));
  EXPECT_EQ(dump_json(instance_to_json(gen(c))), dump_json(instance_to_json(gen(d))));
}
