#include <gtest/gtest.h>

#include "buyback/batch.hpp"
#include "buyback/engine.hpp"
#include "buyback/generator.hpp"
#include "buyback/offline.hpp"
#include "oracles.hpp"

using namespace buyback;

namespace {

Element el(ElementId id, const Rational& w) { return Element{id, Weight(w)}; }

Instance rank1_stream() {
  Instance inst;
  inst.elements = {el(1, 1), el(2, Rational(3, 2)), el(3, 3)};
  inst.matroids = {Uniform{1}};
  inst.arrival_order = {1, 2, 3};
  inst.threshold_r = Weight(2);
  return inst;
}

// e=3 conflicts with a=1 in the first partition and with b=2 in the second
std::vector<MatroidDescriptor> two_conflicts() {
  Partition m1, m2;
  m1.class_of = {{1, 0}, {2, 1}, {3, 0}};
  m1.capacity = {1, 1};
  m2.class_of = {{1, 0}, {2, 1}, {3, 1}};
  m2.capacity = {1, 1};
  return {m1, m2};
}

std::vector<DecisionKind> kinds(const RunReport& rep) {
  std::vector<DecisionKind> out;
  for (const auto& st : rep.trace) out.push_back(st.decision.kind);
  return out;
}

}  // namespace

TEST(ProcessElement, Rank1StreamHandSimulation) {
  const RunReport rep = run_stream(rank1_stream(), Variant::Algorithm1);
  ASSERT_EQ(rep.trace.size(), 3u);
  EXPECT_EQ(kinds(rep), (std::vector{DecisionKind::AcceptFree, DecisionKind::Reject, DecisionKind::AcceptEvict}));
  EXPECT_EQ(rep.trace[2].decision.evicted, (IdSet{1}));
  EXPECT_EQ(rep.utility, Rational(3));
  EXPECT_EQ(rep.final_set, (IdSet{3}));
}

TEST(ProcessElement, FreeAcceptGrowsSet) {
  AlgorithmState st(Params::make(1, 0, 2), {Uniform{3}});
  EXPECT_EQ(process_element(st, el(1, 5)).kind, DecisionKind::AcceptFree);
  EXPECT_EQ(process_element(st, el(2, 1)).kind, DecisionKind::AcceptFree);
  EXPECT_EQ(st.current_ids(), (IdSet{1, 2}));
}

TEST(ProcessElement, TwoConflictsThresholdReject) {
  AlgorithmState st(Params::make(2, 0, Rational(17071, 10000)), two_conflicts());
  process_element(st, el(1, 1));
  process_element(st, el(2, 1));
  const Decision d = process_element(st, el(3, 3));
  EXPECT_EQ(d.kind, DecisionKind::Reject);  // 3 < 1.7071 * 2
  ASSERT_EQ(st.trace.back().candidates.size(), 2u);
  EXPECT_EQ(st.trace.back().candidates[0], ElementId{1});
  EXPECT_EQ(st.trace.back().candidates[1], ElementId{2});
}

TEST(ProcessElement, SameEvicteeCountedOncePerMatroidEvictedOnce) {
  // both uniform matroids of rank 1 pick element 1; threshold is r * (1 + 1)
  AlgorithmState st(Params::make(2, 0, 1), {Uniform{1}, Uniform{1}});
  process_element(st, el(1, 2));
  EXPECT_EQ(process_element(st, el(2, 3)).kind, DecisionKind::Reject);  // 3 < 4
  const Decision d = process_element(st, el(3, 4));
  EXPECT_EQ(d.kind, DecisionKind::AcceptEvict);
  EXPECT_EQ(d.evicted, (IdSet{1}));
  EXPECT_EQ(st.canceled_log.size(), 1u);
}

TEST(ProcessElement, LoopsAreRejected) {
  AlgorithmState st(Params::make(1, 0, 1), {Uniform{0}});
  EXPECT_EQ(process_element(st, el(1, 100)).kind, DecisionKind::Reject);
  EXPECT_TRUE(st.trace.back().loop);
  AlgorithmState st2(Params::make(1, 0, 1), {Uniform{0}});
  EXPECT_EQ(process_element_greedy(st2, el(1, 100)).kind, DecisionKind::Reject);
}

TEST(ProcessElement, ZeroWeightsAreLegal) {
  AlgorithmState st(Params::make(1, 0, 2), {Uniform{1}});
  EXPECT_EQ(process_element(st, el(1, 0)).kind, DecisionKind::AcceptFree);
  EXPECT_EQ(process_element(st, el(2, 0)).kind, DecisionKind::AcceptEvict);  // 0 >= 2 * 0
  EXPECT_EQ(utility(st), Rational(0));
}

TEST(ProcessElement, DuplicatePresentationIsAnError) {
  AlgorithmState st(Params::make(1, 0, 2), {Uniform{1}});
  process_element(st, el(1, 1));
  EXPECT_THROW(process_element(st, el(1, 1)), InputError);
}

TEST(ProcessElement, DependentEntryStateIsInvariantViolation) {
  AlgorithmState st(Params::make(1, 0, 2), {Uniform{1}});
  st.current = {el(1, 1), el(2, 1)};
  EXPECT_THROW(process_element(st, el(3, 1)), InvariantViolation);
}

TEST(Params, Validation) {
  EXPECT_THROW(Params::make(0, 0, 2), InputError);
  EXPECT_THROW(Params::make(1, -1, 2), InputError);
  EXPECT_THROW(Params::make(1, 0, Rational(1, 2)), InputError);
  EXPECT_NO_THROW(Params::make(1, 0, 1));
  EXPECT_FALSE(Params::make(1, 0, 1).ratio_defined());
  EXPECT_THROW(AlgorithmState(Params::make(2, 0, 2), {Uniform{1}}), InputError);
}

// ---- Algorithm 2 --------------------------------------------------------------

TEST(ProcessElementGreedy, SameDecisionsOnTheThreeExamples) {
  const RunReport a = run_stream(rank1_stream(), Variant::Algorithm1);
  const RunReport b = run_stream(rank1_stream(), Variant::Algorithm2);
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].decision, b.trace[i].decision);

  AlgorithmState st(Params::make(2, 0, Rational(17071, 10000)), two_conflicts());
  process_element_greedy(st, el(1, 1));
  process_element_greedy(st, el(2, 1));
  EXPECT_EQ(process_element_greedy(st, el(3, 3)).kind, DecisionKind::Reject);
}

TEST(ProcessElementGreedy, EmptySetAcceptsFree) {
  AlgorithmState st(Params::make(2, 0, 2), two_conflicts());
  EXPECT_EQ(process_element_greedy(st, el(3, 1)).kind, DecisionKind::AcceptFree);
}

TEST(ProcessElementGreedy, DropsTwoAndAccepts) {
  AlgorithmState st(Params::make(2, 0, 2), two_conflicts());
  process_element_greedy(st, el(1, 1));
  process_element_greedy(st, el(2, 2));
  const Decision d = process_element_greedy(st, el(3, 6));  // 6 >= 2 * (1 + 2)
  EXPECT_EQ(d.kind, DecisionKind::AcceptEvict);
  EXPECT_EQ(d.evicted, (IdSet{1, 2}));
}

TEST(ProcessElementGreedy, ElementDroppedByGreedyIsRejected) {
  AlgorithmState st(Params::make(1, 0, 1), {Uniform{1}});
  process_element_greedy(st, el(1, 5));
  EXPECT_EQ(process_element_greedy(st, el(2, 4)).kind, DecisionKind::Reject);
}

// The per-matroid rule and the greedy rule disagree when one matroid's
// lightest choice is not what greedy drops. x=1 (w 1), y=2 (w 2), e=3 (w 10):
// a rank-2 uniform matroid makes {x, y, e} the circuit, and a partition puts
// e and y in one capacity-1 class.
TEST(AlgorithmEquivalence, CounterexampleWithTwoMatroids) {
  Partition p;
  p.class_of = {{1, 0}, {2, 1}, {3, 1}};
  p.capacity = {1, 1};
  Instance inst;
  inst.elements = {el(1, 1), el(2, 2), el(3, 10)};
  inst.matroids = {Uniform{2}, p};
  inst.arrival_order = {1, 2, 3};
  inst.threshold_r = Weight(2);
  const RunReport a = run_stream(inst, Variant::Algorithm1);
  const RunReport b = run_stream(inst, Variant::Algorithm2);
  EXPECT_EQ(a.trace[2].decision.evicted, (IdSet{1, 2}));
  EXPECT_EQ(b.trace[2].decision.evicted, (IdSet{2}));
  EXPECT_EQ(a.final_set, (IdSet{3}));
  EXPECT_EQ(b.final_set, (IdSet{1, 3}));
  // the literal rule agrees with the independent transcription
  const auto steps = oracle::run_rule(inst, Rational(2));
  EXPECT_EQ(steps[2].evicted, (IdSet{1, 2}));
}

// ---- run_stream and the baseline --------------------------------------------------

TEST(RunStream, EmptyInstance) {
  Instance inst;
  inst.matroids = {Uniform{3}};
  const RunReport rep = run_stream(inst, Variant::Algorithm1);
  EXPECT_EQ(rep.utility, Rational(0));
  EXPECT_TRUE(rep.final_set.empty());
}

TEST(RunStream, FreeDisposalMeetsRatio) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorConfig cfg;
    cfg.kind = InstanceKind::FreeDisposal;
    cfg.seed = seed;
    cfg.n = 4;
    cfg.advertisers = 2;
    const Instance inst = gen(cfg);
    const RunReport rep = run_stream(inst, Variant::Algorithm1);
    const Rational opt = oracle::opt(inst).weight;
    EXPECT_GE(rep.utility * competitive_ratio_exact(2, 0, rep.params.r), opt);
    EXPECT_GE(to_double(rep.utility) * 5.82843, to_double(opt) * (1 - 1e-9));
    EXPECT_GE(sgn(rep.utility), 0);
  }
}

TEST(RunStream, FamilyNeedsSingleElementVariant) {
  Instance inst;
  inst.elements = {el(1, 1)};
  inst.matroids = {ExplicitFamily{{IdSet{1}}}};
  inst.arrival_order = {1};
  EXPECT_THROW(run_stream(inst, Variant::Algorithm1), InputError);
  EXPECT_NO_THROW(run_stream(inst, Variant::SingleElement));
}

TEST(SingleElementBaseline, EqualWeightsKeepFirst) {
  Instance inst;
  for (ElementId i = 1; i <= 4; ++i) inst.elements.push_back(el(i, 1));
  inst.matroids = {ExplicitFamily{{IdSet{1, 2, 3, 4}}}};
  inst.arrival_order = {1, 2, 3, 4};
  const RunReport rep = single_element_baseline(inst);
  EXPECT_EQ(rep.final_set, (IdSet{1}));
  EXPECT_EQ(rep.utility, Rational(1));
}

TEST(SingleElementBaseline, PenaltySwap) {
  Instance inst;
  inst.elements = {el(1, 1), el(2, 4)};
  inst.matroids = {ExplicitFamily{{IdSet{1, 2}}}};
  inst.arrival_order = {1, 2};
  inst.penalty_f = Weight(1);
  const RunReport rep = single_element_baseline(inst);  // 4 >= 3.414 * 1
  EXPECT_EQ(rep.final_set, (IdSet{2}));
  EXPECT_EQ(rep.utility, Rational(3));
}

TEST(SingleElementBaseline, GuaranteeAgainstOpt) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GeneratorConfig cfg;
    cfg.kind = InstanceKind::Star;
    cfg.k = 1;
    cfg.n = 3 + seed % 6;
    cfg.order = ArrivalOrder::Random;
    cfg.seed = seed;
    cfg.f = Weight(Rational(static_cast<long>(seed % 3), 2));
    const Instance inst = gen(cfg);
    const RunReport rep = single_element_baseline(inst);
    const Rational n(static_cast<long>(inst.elements.size()));
    EXPECT_GE(rep.utility * n * competitive_ratio_exact(1, cfg.f.value(), rep.params.r), oracle::opt(inst).weight);
  }
}

// ---- snapshot / restore ---------------------------------------------------------

TEST(Snapshot, RestoreReplaysIdentically) {
  BuybackEngine eng(Params::optimal(2, 0), two_conflicts());
  eng.process(el(1, 1));
  const auto snap = eng.snapshot();
  const Decision first = eng.process(el(3, 5));
  eng.restore(snap);
  EXPECT_EQ(eng.process(el(3, 5)), first);
  eng.restore(snap);
  EXPECT_EQ(eng.process(el(2, 1)).kind, DecisionKind::AcceptFree);  // independent outcome after rewind
  EXPECT_EQ(eng.state().current_ids(), (IdSet{1, 2}));
}

TEST(Snapshot, StaleTokenRejected) {
  BuybackEngine a(Params::optimal(2, 0), two_conflicts());
  BuybackEngine b(Params::make(1, 0, 2), {Uniform{1}});
  EXPECT_THROW(b.restore(a.snapshot()), InputError);
  EXPECT_THROW(b.restore(BuybackEngine::Snapshot{}), InputError);
}

// ---- utility --------------------------------------------------------------------

TEST(Utility, Examples) {
  AlgorithmState st(Params::make(1, 3, 5), {Uniform{1}});
  EXPECT_EQ(utility(st), Rational(0));
  st.accepted_log = {el(1, 4)};
  EXPECT_EQ(utility(st), Rational(4));
  AlgorithmState st2(Params::make(1, 0, 2), {Uniform{1}});
  st2.accepted_log = {el(1, 1), el(2, 3)};
  st2.canceled_log = {el(1, 1)};
  EXPECT_EQ(utility(st2), Rational(3));
}

// ---- properties over generated instances ----------------------------------------

namespace {

std::vector<Instance> mixed_instances(std::uint64_t seed, std::size_t count, int max_k = 3) {
  std::vector<Instance> out;
  for (std::size_t i = 0; i < count; ++i) {
    GeneratorConfig cfg;
    cfg.seed = derive_seed(seed, i);
    cfg.kind = InstanceKind::Mixed;
    cfg.k = 1 + static_cast<int>(i % max_k);
    cfg.n = 2 + i % 9;
    cfg.f = Weight(Rational(static_cast<long>(i % 3), 2));
    cfg.order = static_cast<ArrivalOrder>(i % 4);
    out.push_back(gen(cfg));
  }
  return out;
}

}  // namespace

TEST(EngineProperties, DecisionsMatchIndependentTranscription) {
  for (const auto& inst : mixed_instances(21, 150)) {
    const RunReport rep = run_stream(inst, Variant::Algorithm1);
    const auto expected = oracle::run_rule(inst, rep.params.r);
    ASSERT_EQ(rep.trace.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      ASSERT_EQ(rep.trace[i].decision.accepted(), expected[i].accepted) << "step " << i + 1;
      ASSERT_EQ(rep.trace[i].decision.evicted, expected[i].evicted) << "step " << i + 1;
    }
  }
}

TEST(EngineProperties, IndependenceUtilityAndPenaltyAtEveryStep) {
  for (const auto& inst : mixed_instances(22, 150)) {
    const Params params = Params::from_instance(inst);
    AlgorithmState st(params, inst.matroids);
    std::map<ElementId, Rational> w;
    for (const auto& e : inst.elements) w[e.id] = e.weight.value();
    Rational prev = 0;
    for (const auto& e : inst.stream()) {
      process_element(st, e);
      ASSERT_TRUE(oracle::independent_all(inst.matroids, st.current_ids()));
      Rational a = 0, c = 0;
      for (const auto& x : st.accepted_log) a += w[x.id];
      for (const auto& x : st.canceled_log) c += w[x.id];
      ASSERT_EQ(utility(st), a - (1 + params.f) * c);
      ASSERT_GE(utility(st), prev);  // r > 1 + f here
      prev = utility(st);
      // current = accepted \ canceled
      std::set<ElementId> expect;
      for (const auto& x : st.accepted_log) expect.insert(x.id);
      for (const auto& x : st.canceled_log) expect.erase(x.id);
      ASSERT_EQ(IdSet(expect.begin(), expect.end()), st.current_ids());
    }
    const RunReport rep = make_report(st, Variant::Algorithm1);
    const PenaltyCheck pc = check_penalty_bound(rep, w);
    EXPECT_TRUE(pc.per_element_ok && pc.total_ok && pc.accounting_ok);
  }
}

TEST(EngineProperties, ExactOptimumAtK1F0R1) {
  for (std::size_t i = 0; i < 120; ++i) {
    GeneratorConfig cfg;
    cfg.seed = derive_seed(23, i);
    cfg.kind = i % 2 ? InstanceKind::GraphicIntersection : InstanceKind::RandomPartitionIntersection;
    cfg.k = 1;
    cfg.n = 2 + i % 9;
    cfg.r = Weight(1);
    const Instance inst = gen(cfg);
    EXPECT_EQ(run_stream(inst, Variant::Algorithm1).final_weight, oracle::opt(inst).weight);
  }
}

TEST(EngineProperties, CompetitiveBoundWithOptimalThreshold) {
  for (const auto& inst : mixed_instances(24, 150)) {
    const RunReport rep = run_stream(inst, Variant::Algorithm1);
    const Rational opt = oracle::opt(inst).weight;
    EXPECT_GE(rep.utility * competitive_ratio_exact(inst.k(), rep.params.f, rep.params.r), opt);
    EXPECT_GE(rep.final_weight * final_weight_factor(inst.k(), rep.params.r), opt);
  }
}

TEST(EngineProperties, VariantsAgreeOnSingleMatroids) {
  for (std::size_t i = 0; i < 100; ++i) {
    GeneratorConfig cfg;
    cfg.seed = derive_seed(25, i);
    cfg.kind = InstanceKind::Mixed;
    cfg.k = 1;
    cfg.n = 2 + i % 9;
    const Instance inst = gen(cfg);
    const RunReport a = run_stream(inst, Variant::Algorithm1);
    const RunReport b = run_stream(inst, Variant::Algorithm2);
    for (std::size_t s = 0; s < a.trace.size(); ++s) ASSERT_EQ(a.trace[s].decision, b.trace[s].decision);
  }
}

TEST(EngineProperties, VariantsAgreeOnBipartiteMatching) {
  for (std::size_t i = 0; i < 100; ++i) {
    GeneratorConfig cfg;
    cfg.seed = derive_seed(26, i);
    cfg.kind = InstanceKind::BipartiteMatching;
    cfg.n = 2 + i % 2;
    cfg.right_n = 2 + i % 3;
    const Instance inst = gen(cfg);
    const RunReport a = run_stream(inst, Variant::Algorithm1);
    const RunReport b = run_stream(inst, Variant::Algorithm2);
    for (std::size_t s = 0; s < a.trace.size(); ++s) ASSERT_EQ(a.trace[s].decision, b.trace[s].decision);
  }
}
