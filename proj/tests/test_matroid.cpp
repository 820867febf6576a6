#include <gtest/gtest.h>

#include <random>

#include "buyback/generator.hpp"
#include "buyback/matroid.hpp"
#include "oracles.hpp"

using namespace buyback;

namespace {

// a=1, b=2, c=3 throughout
constexpr ElementId a = 1, b = 2, c = 3;

Graphic triangle() {
  Graphic g;
  g.vertex_count = 4;  // vertices 1..3 used
  g.endpoints[12] = {1, 2};
  g.endpoints[23] = {2, 3};
  g.endpoints[31] = {3, 1};
  return g;
}

Element el(ElementId id, long w) { return Element{id, Weight(w)}; }

}  // namespace

TEST(Independence, UniformEmptyAndOversized) {
  const MatroidDescriptor u = Uniform{2};
  EXPECT_TRUE(is_independent(u, IdSet{}));
  EXPECT_FALSE(is_independent(u, IdSet{a, b, c}));
}

TEST(Independence, TriangleCycleIsDependent) {
  const MatroidDescriptor g = triangle();
  EXPECT_FALSE(is_independent(g, IdSet{12, 23, 31}));
  EXPECT_TRUE(is_independent(g, IdSet{12, 23}));
  EXPECT_TRUE(is_independent(g, IdSet{23, 31}));
  EXPECT_TRUE(is_independent(g, IdSet{12, 31}));
  EXPECT_EQ(is_independent(g, IdSet{12, 23, 31}), oracle::independent(g, IdSet{12, 23, 31}));
}

TEST(Independence, UnknownIdIsInputError) {
  Partition p;
  p.class_of[a] = 0;
  p.capacity = {1};
  EXPECT_THROW(is_independent(p, IdSet{a, 99}), InputError);
  EXPECT_THROW(is_independent(triangle(), IdSet{99}), InputError);
}

TEST(Independence, SelfLoopEdgeAndRankZeroAreLoops) {
  Graphic g;
  g.vertex_count = 2;
  g.endpoints[a] = {1, 1};
  EXPECT_TRUE(is_loop(g, a));
  EXPECT_TRUE(is_loop(Uniform{0}, a));
  EXPECT_FALSE(is_loop(Uniform{1}, a));
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(Uniform{2}, IdSet{a, b, c}), 2u);
  Partition p;
  p.class_of = {{a, 0}, {b, 0}, {c, 1}};
  p.capacity = {1, 1};
  EXPECT_EQ(rank(p, IdSet{a, b, c}), 2u);
  EXPECT_EQ(oracle::rank(p, IdSet{a, b, c}), 2u);
  EXPECT_EQ(rank(triangle(), IdSet{}), 0u);
  EXPECT_EQ(rank(Uniform{5}, IdSet{}), 0u);
}

TEST(Rank, FamilyUnsupported) {
  const MatroidDescriptor fam = ExplicitFamily{{IdSet{a, b}, IdSet{c}}};
  EXPECT_THROW(rank(fam, IdSet{a}), UnsupportedOperation);
  EXPECT_THROW(circuit(fam, IdSet{a}, b), UnsupportedOperation);
}

TEST(Circuit, Examples) {
  EXPECT_EQ(circuit(Uniform{2}, IdSet{a, b}, c), (IdSet{a, b, c}));

  Graphic path;
  path.vertex_count = 3;
  path.endpoints[10] = {0, 1};  // ab
  path.endpoints[11] = {1, 2};  // bc
  path.endpoints[12] = {0, 2};  // ac
  EXPECT_EQ(circuit(path, IdSet{10, 11}, 12), (IdSet{10, 11, 12}));

  Partition p;
  p.class_of = {{a, 0}, {b, 0}};
  p.capacity = {1};
  EXPECT_EQ(circuit(p, IdSet{a}, b), (IdSet{a, b}));
  EXPECT_EQ(circuit(Uniform{3}, IdSet{a, b}, c), std::nullopt);
}

TEST(Circuit, DependentBaseIsPreconditionError) {
  EXPECT_THROW(circuit(Uniform{1}, IdSet{a, b}, c), PreconditionError);
}

TEST(MinEvict, Examples) {
  const std::vector<Element> s{el(a, 5), el(b, 3)};
  EXPECT_EQ(min_evict(Uniform{2}, s, el(c, 10)), b);
  EXPECT_EQ(min_evict(Uniform{3}, s, el(c, 10)), std::nullopt);
  const std::vector<Element> tie{el(1, 3), el(2, 3)};
  EXPECT_EQ(min_evict(Uniform{2}, tie, el(3, 7)), ElementId{1});
}

TEST(MinEvict, ZeroWeightIsEvictedFirst) {
  const std::vector<Element> s{el(a, 0), el(b, 3)};
  EXPECT_EQ(min_evict(Uniform{2}, s, el(c, 0)), a);
}

TEST(MinEvict, LoopThrows) {
  EXPECT_THROW(min_evict(Uniform{0}, std::vector<Element>{}, el(a, 1)), PreconditionError);
}

TEST(Axioms, Examples) {
  const IdSet five{1, 2, 3, 4, 5};
  EXPECT_TRUE(axiom_check(Uniform{3}, five).passed);

  Partition p;
  p.class_of = {{1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 2}};
  p.capacity = {1, 2, 0};
  EXPECT_TRUE(axiom_check(p, five).passed);

  const MatroidDescriptor fam = ExplicitFamily{{IdSet{a, b}, IdSet{c}}};
  const AxiomReport rep = axiom_check(fam, IdSet{a, b, c});
  EXPECT_FALSE(rep.passed);
  EXPECT_EQ(rep.failed_property, "exchange");
  EXPECT_EQ(rep.witness_a, (IdSet{c}));
  EXPECT_EQ(rep.witness_b.size(), 2u);
  // the witness really has no augmenting element
  for (ElementId x : rep.witness_b) EXPECT_FALSE(oracle::independent(fam, make_id_set({c, x})));
}

TEST(Axioms, GroundTooLarge) {
  IdSet big;
  for (ElementId i = 0; i < 17; ++i) big.push_back(i);
  EXPECT_THROW(axiom_check(Uniform{2}, big), SizeError);
}

TEST(Axioms, CapacityZeroClassIsStillAMatroid) {
  Partition p;
  p.class_of = {{a, 0}, {b, 1}};
  p.capacity = {0, 1};
  EXPECT_TRUE(axiom_check(p, IdSet{a, b}).passed);
}

// ---- property tests over generated descriptors --------------------------------

namespace {

std::vector<std::pair<MatroidDescriptor, IdSet>> random_descriptors(std::uint64_t seed, std::size_t count) {
  std::vector<std::pair<MatroidDescriptor, IdSet>> out;
  const InstanceKind kinds[] = {InstanceKind::Uniform, InstanceKind::RandomPartitionIntersection,
                                InstanceKind::GraphicIntersection};
  for (std::size_t i = 0; i < count; ++i) {
    GeneratorConfig cfg;
    cfg.seed = derive_seed(seed, i);
    cfg.kind = kinds[i % 3];
    cfg.k = 1;
    cfg.n = 3 + i % 8;
    const Instance inst = gen(cfg);
    out.push_back({inst.matroids[0], make_id_set(ids_of(inst.elements))});
  }
  return out;
}

}  // namespace

TEST(MatroidProperties, IndependenceAgreesWithOracleAndIsHereditary) {
  for (const auto& [m, ground] : random_descriptors(11, 90)) {
    for (std::uint32_t mask = 0; mask < (1u << ground.size()); ++mask) {
      const IdSet s = oracle::subset(ground, mask);
      const bool ind = is_independent(m, s);
      ASSERT_EQ(ind, oracle::independent(m, s)) << kind_name(m);
      if (!ind) continue;
      for (std::size_t i = 0; i < s.size(); ++i) {
        IdSet t = s;
        t.erase(t.begin() + static_cast<long>(i));
        ASSERT_TRUE(is_independent(m, t));
      }
    }
  }
}

TEST(MatroidProperties, GreedyRankEqualsEnumeration) {
  for (const auto& [m, ground] : random_descriptors(12, 90)) {
    for (std::uint32_t mask = 0; mask < (1u << ground.size()); mask += 3) {
      const IdSet s = oracle::subset(ground, mask);
      ASSERT_EQ(rank(m, s), oracle::rank(m, s));
    }
  }
}

TEST(MatroidProperties, CircuitCharacterization) {
  for (const auto& [m, ground] : random_descriptors(13, 60)) {
    for (std::uint32_t mask = 0; mask < (1u << ground.size()); ++mask) {
      const IdSet s = oracle::subset(ground, mask);
      if (!oracle::independent(m, s)) continue;
      for (ElementId e : ground) {
        if (contains(s, e)) continue;
        const auto ckt = circuit(m, s, e);
        const auto expected = oracle::circuits_through(m, s, e);
        if (!ckt) {
          ASSERT_TRUE(expected.empty());
          continue;
        }
        ASSERT_EQ(expected.size(), 1u) << "a matroid has a unique circuit in S + e";
        ASSERT_EQ(*ckt, expected.front());
        IdSet joined = with_element(s, e);
        for (ElementId x : s) {
          const bool ok = oracle::independent(m, without_element(joined, x));
          ASSERT_EQ(ok, contains(*ckt, x));
        }
      }
    }
  }
}

TEST(MatroidProperties, MinEvictIsLightestCircuitMember) {
  std::mt19937_64 rng(99);
  for (const auto& [m, ground] : random_descriptors(14, 60)) {
    std::map<ElementId, long> w;
    for (ElementId x : ground) w[x] = static_cast<long>(rng() % 4);  // many ties
    for (std::uint32_t mask = 0; mask < (1u << ground.size()); mask += 5) {
      const IdSet s = oracle::subset(ground, mask);
      if (!oracle::independent(m, s)) continue;
      std::vector<Element> se;
      for (ElementId x : s) se.push_back(el(x, w[x]));
      for (ElementId e : ground) {
        if (contains(s, e) || is_loop(m, e)) continue;
        const auto pick = min_evict(m, se, el(e, w[e]));
        const auto cs = oracle::circuits_through(m, s, e);
        if (cs.empty()) {
          ASSERT_FALSE(pick);
          continue;
        }
        ASSERT_TRUE(pick);
        ASSERT_TRUE(contains(cs.front(), *pick));
        for (ElementId x : cs.front()) {
          if (x == e) continue;
          ASSERT_TRUE(w[*pick] < w[x] || (w[*pick] == w[x] && *pick <= x));
        }
      }
    }
  }
}
