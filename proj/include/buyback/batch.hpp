#ifndef BUYBACK_BATCH_HPP
#define BUYBACK_BATCH_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "buyback/engine.hpp"
#include "buyback/generator.hpp"
#include "buyback/offline.hpp"
#include "buyback/ratio.hpp"

namespace buyback {

struct BatchConfig {
  std::vector<GeneratorConfig> configs;
  std::size_t instances_per_config = 1;
  std::vector<Variant> variants{Variant::Algorithm1};
  bool compare_opt = true;
};

struct RunSummary {
  std::size_t config_index = 0;
  std::size_t instance_index = 0;
  std::uint64_t seed = 0;
  InstanceKind kind = InstanceKind::RandomPartitionIntersection;
  Variant variant = Variant::Algorithm1;
  int k = 1;
  std::size_t n = 0;
  Rational f{0};
  Rational r{0};
  Rational utility{0};
  Rational final_weight{0};
  Rational penalty_total{0};
  std::optional<Rational> opt_weight;
  std::optional<Rational> ratio;
  std::optional<Rational> theoretical_c;  // bound this run is held to, when defined
  std::map<std::string, bool> invariants;
  std::string error;
};

struct InvariantTally {
  std::size_t checked = 0;
  std::size_t failed = 0;
};

struct BatchReport {
  std::vector<RunSummary> runs;
  std::optional<Rational> worst_ratio;
  std::optional<Rational> theoretical_c;  // largest bound among the runs
  bool worst_within_c = true;
  std::map<std::string, InvariantTally> invariants;
  std::size_t errors = 0;

  bool passed() const {
    if (errors != 0 || !worst_within_c) return false;
    for (const auto& [name, t] : invariants) {
      if (t.failed != 0) return false;
    }
    return true;
  }
};

namespace detail {

inline std::map<ElementId, Rational> weight_map(const Instance& inst) {
  std::map<ElementId, Rational> w;
  for (const auto& e : inst.elements) w[e.id] = e.weight.value();
  return w;
}

/// Recomputes utility from the trace and checks it against the report, and
/// that no step lowered the utility.
inline std::pair<bool, bool> replay_utility(const RunReport& rep, const std::map<ElementId, Rational>& w) {
  Rational accepted = 0, canceled = 0;
  Rational prev = 0;
  bool monotone = true;
  for (const auto& st : rep.trace) {
    if (st.decision.accepted()) accepted += w.at(st.element.id);
    for (ElementId x : st.decision.evicted) canceled += w.at(x);
    const Rational u = accepted - (1 + rep.params.f) * canceled;
    if (u < prev && rep.params.r >= 1 + rep.params.f) monotone = false;
    prev = u;
  }
  return {accepted - (1 + rep.params.f) * canceled == rep.utility, monotone};
}

/// Largest |S| over the run, replayed from the trace.
inline std::size_t max_held(const RunReport& rep) {
  std::size_t held = 0, best = 0;
  for (const auto& st : rep.trace) {
    if (st.decision.accepted()) ++held;
    held -= st.decision.evicted.size();
    best = std::max(best, held);
  }
  return best;
}

}  // namespace detail

/// Runs every variant on every generated instance and checks the engine's
/// invariants. Per-instance failures are recorded and the batch continues.
inline RunSummary summarize_run(const Instance& inst, Variant variant, const GeneratorConfig& cfg,
                                const std::optional<OptResult>& opt) {
  RunSummary s;
  s.kind = cfg.kind;
  s.variant = variant;
  s.k = inst.k();
  s.n = inst.elements.size();
  s.f = inst.penalty_f.value();
  const RunReport rep = run_stream(inst, variant);
  s.r = rep.params.r;
  s.utility = rep.utility;
  s.final_weight = rep.final_weight;
  s.penalty_total = rep.penalty_total;
  const auto w = detail::weight_map(inst);
  const Rational& r = rep.params.r;
  const Rational& f = rep.params.f;

  s.invariants["final_independent"] = is_independent_in_all(inst.matroids, rep.final_set);
  const auto [identity, monotone] = detail::replay_utility(rep, w);
  s.invariants["utility_identity"] = identity;
  s.invariants["monotone_utility"] = monotone;
  if (r > 1) {
    const PenaltyCheck pc = check_penalty_bound(rep, w);
    s.invariants["penalty_bound"] = pc.per_element_ok && pc.total_ok && pc.accounting_ok;
  }
  if (cfg.kind == InstanceKind::BipartiteMatching) {
    const std::size_t side = std::min(cfg.n, cfg.right_n ? cfg.right_n : cfg.n);
    s.invariants["matching_size"] = detail::max_held(rep) <= side;
  }
  if (cfg.kind == InstanceKind::FreeDisposal) s.invariants["nonnegative_utility"] = sgn(rep.utility) >= 0;

  if (opt) {
    s.opt_weight = opt->weight;
    if (sgn(rep.utility) > 0) {
      Rational ratio = opt->weight / rep.utility;
      ratio.canonicalize();
      s.ratio = ratio;
    }
    if (variant == Variant::SingleElement) {
      if (r > 1 + f) {
        Rational c = Rational(static_cast<long>(inst.elements.size())) * competitive_ratio_exact(1, f, r);
        c.canonicalize();
        s.theoretical_c = c;
        s.invariants["competitive_bound"] = rep.utility * c >= opt->weight;
      }
    } else {
      if (r > 1) s.invariants["final_weight_bound"] = rep.final_weight * final_weight_factor(inst.k(), r) >= opt->weight;
      if (r > 1 + f) {
        Rational c = competitive_ratio_exact(inst.k(), f, r);
        c.canonicalize();
        s.theoretical_c = c;
        s.invariants["competitive_bound"] = rep.utility * c >= opt->weight;
      }
      if (inst.k() == 1 && sgn(f) == 0 && r == 1) s.invariants["k1_exact"] = rep.final_weight == opt->weight;
    }
  }
  return s;
}

inline BatchReport run_batch(const BatchConfig& batch) {
  BatchReport out;
  for (std::size_t ci = 0; ci < batch.configs.size(); ++ci) {
    for (std::size_t ii = 0; ii < batch.instances_per_config; ++ii) {
      GeneratorConfig cfg = batch.configs[ci];
      cfg.seed = derive_seed(batch.configs[ci].seed, ii);
      for (Variant v : batch.variants) {
        RunSummary s;
        try {
          const Instance inst = gen(cfg);
          std::optional<OptResult> opt;
          if (batch.compare_opt) opt = brute_opt(inst);
          s = summarize_run(inst, v, cfg, opt);
        } catch (const Error& ex) {
          s.kind = cfg.kind;
          s.variant = v;
          s.error = ex.what();
        }
        s.config_index = ci;
        s.instance_index = ii;
        s.seed = cfg.seed;
        out.runs.push_back(std::move(s));
      }
    }
  }
  for (const auto& s : out.runs) {
    if (!s.error.empty()) ++out.errors;
    for (const auto& [name, ok] : s.invariants) {
      auto& t = out.invariants[name];
      ++t.checked;
      if (!ok) ++t.failed;
    }
    if (s.ratio && (!out.worst_ratio || *s.ratio > *out.worst_ratio)) out.worst_ratio = s.ratio;
    if (s.theoretical_c && (!out.theoretical_c || *s.theoretical_c > *out.theoretical_c)) {
      out.theoretical_c = s.theoretical_c;
    }
    if (s.ratio && s.theoretical_c && *s.ratio > *s.theoretical_c) out.worst_within_c = false;
  }
  return out;
}

}  // namespace buyback

#endif  // BUYBACK_BATCH_HPP
