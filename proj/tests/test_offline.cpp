#include <gtest/gtest.h>

#include "buyback/generator.hpp"
#include "buyback/offline.hpp"
#include "oracles.hpp"

using namespace buyback;

namespace {

Element el(ElementId id, long w) { return Element{id, Weight(w)}; }

// edges e11=0, e12=1, e21=2, e22=3
Instance two_by_two() {
  Partition left, right;
  left.class_of = {{0, 0}, {1, 0}, {2, 1}, {3, 1}};
  left.capacity = {1, 1};
  right.class_of = {{0, 0}, {1, 1}, {2, 0}, {3, 1}};
  right.capacity = {1, 1};
  Instance inst;
  inst.elements = {el(0, 5), el(1, 4), el(2, 4), el(3, 1)};
  inst.matroids = {left, right};
  inst.arrival_order = {0, 1, 2, 3};
  return inst;
}

}  // namespace

TEST(BruteOpt, FreeMatroidTakesEverything) {
  Instance inst;
  inst.elements = {el(0, 1), el(1, 2), el(2, 3)};
  inst.matroids = {Uniform{3}};
  inst.arrival_order = {0, 1, 2};
  const OptResult o = brute_opt(inst);
  EXPECT_EQ(o.set, (IdSet{0, 1, 2}));
  EXPECT_EQ(o.weight, Rational(6));
}

TEST(BruteOpt, TriangleGraphic) {
  Graphic g;
  g.vertex_count = 3;
  g.endpoints = {{0, {0, 1}}, {1, {1, 2}}, {2, {0, 2}}};
  Instance inst;
  inst.elements = {el(0, 3), el(1, 2), el(2, 2)};
  inst.matroids = {g};
  inst.arrival_order = {0, 1, 2};
  EXPECT_EQ(brute_opt(inst).weight, Rational(5));
  EXPECT_EQ(oracle::opt(inst).weight, Rational(5));
}

TEST(BruteOpt, TwoByTwoMatching) {
  const OptResult o = brute_opt(two_by_two());
  EXPECT_EQ(o.set, (IdSet{1, 2}));
  EXPECT_EQ(o.weight, Rational(8));
}

TEST(BruteOpt, TiesGoToLexicographicallySmallest) {
  Instance inst;
  inst.elements = {el(0, 1), el(1, 1), el(2, 1)};
  inst.matroids = {Uniform{1}};
  inst.arrival_order = {2, 1, 0};
  EXPECT_EQ(brute_opt(inst).set, (IdSet{0}));
}

TEST(BruteOpt, SizeLimit) {
  Instance inst;
  for (ElementId i = 0; i < 23; ++i) inst.elements.push_back(el(i, 1));
  inst.matroids = {Uniform{2}};
  inst.arrival_order = ids_of(inst.elements);
  EXPECT_THROW(brute_opt(inst), SizeError);
}

TEST(GreedyOffline, Examples) {
  const OptResult g = greedy_offline(two_by_two());
  EXPECT_EQ(g.set, (IdSet{0, 3}));
  EXPECT_EQ(g.weight, Rational(6));
  Instance empty;
  empty.matroids = {Uniform{1}};
  EXPECT_EQ(greedy_offline(empty).weight, Rational(0));
  EXPECT_TRUE(greedy_offline(empty).set.empty());
}

TEST(OfflineProperties, AgreesWithEnumerationAndGreedyIsWithinK) {
  for (std::size_t i = 0; i < 200; ++i) {
    GeneratorConfig cfg;
    cfg.seed = derive_seed(31, i);
    cfg.kind = InstanceKind::Mixed;
    cfg.k = 1 + static_cast<int>(i % 3);
    cfg.n = 1 + i % 12;
    cfg.distinct_weights = i % 2 == 0;
    const Instance inst = gen(cfg);
    const OptResult o = brute_opt(inst);
    const oracle::Opt ref = oracle::opt(inst);
    ASSERT_EQ(o.weight, ref.weight);
    ASSERT_EQ(o.set, ref.set);
    ASSERT_TRUE(oracle::independent_all(inst.matroids, o.set));
    ASSERT_EQ(inst.weight_of(o.set), o.weight);
    const OptResult g = greedy_offline(inst);
    ASSERT_TRUE(oracle::independent_all(inst.matroids, g.set));
    ASSERT_LE(g.weight, o.weight);
    ASSERT_GE(g.weight * inst.k(), o.weight);
    if (inst.k() == 1) {
      ASSERT_EQ(g.weight, o.weight);
    }
  }
}
