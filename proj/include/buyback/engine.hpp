#ifndef BUYBACK_ENGINE_HPP
#define BUYBACK_ENGINE_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "buyback/instance.hpp"
#include "buyback/matroid.hpp"
#include "buyback/ratio.hpp"

namespace buyback {

enum class ThresholdMode { Explicit, Optimal };

struct Params {
  int k = 1;
  Rational f{0};
  Rational r{1};
  ThresholdMode r_mode = ThresholdMode::Explicit;

  static Params make(int k, Rational f, Rational r) {
    if (k < 1) throw InputError("k must be >= 1");
    if (sgn(f) < 0) throw InputError("penalty factor f must be >= 0");
    if (r < 1) throw InputError("threshold r must be >= 1, got " + to_fraction_string(r));
    return Params{k, std::move(f), std::move(r), ThresholdMode::Explicit};
  }

  static Params optimal(int k, Rational f) {
    Params p = make(k, f, optimal_r_rational(k, f));
    p.r_mode = ThresholdMode::Optimal;
    return p;
  }

  static Params from_instance(const Instance& inst) {
    Params p = make(inst.k(), inst.penalty_f.value(), resolve_threshold(inst));
    if (!inst.threshold_r) p.r_mode = ThresholdMode::Optimal;
    return p;
  }

  bool ratio_defined() const { return r > 1 + f; }
};

enum class DecisionKind { AcceptFree, AcceptEvict, Reject };

inline const char* to_string(DecisionKind k) {
  switch (k) {
    case DecisionKind::AcceptFree: return "accept_free";
    case DecisionKind::AcceptEvict: return "accept_evict";
    case DecisionKind::Reject: return "reject";
  }
  return "?";
}

struct Decision {
  DecisionKind kind = DecisionKind::Reject;
  IdSet evicted;  // nonempty exactly for AcceptEvict

  bool accepted() const { return kind != DecisionKind::Reject; }
  friend bool operator==(const Decision&, const Decision&) = default;
};

/// One step of a run, with the per-matroid circuits captured at decision time.
struct StepRecord {
  std::size_t step = 0;  // 1-based
  Element element;
  Decision decision;
  bool loop = false;
  std::vector<std::optional<ElementId>> candidates;  // e_{i_j}; empty for the greedy variant
  std::vector<std::optional<IdSet>> circuits;       // circuit of S(i-1) + e in each matroid
};

enum class Variant { Algorithm1, Algorithm2, SingleElement };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::Algorithm1: return "alg1";
    case Variant::Algorithm2: return "alg2";
    case Variant::SingleElement: return "single_element";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "alg1") return Variant::Algorithm1;
  if (s == "alg2") return Variant::Algorithm2;
  if (s == "single_element" || s == "single") return Variant::SingleElement;
  throw InputError("unknown variant '" + s + "' (expected alg1|alg2|single_element)");
}

struct AlgorithmState {
  Params params;
  std::vector<MatroidDescriptor> matroids;
  std::vector<Element> current;  // S, sorted by id
  std::vector<Element> accepted_log;
  std::vector<Element> canceled_log;
  std::size_t step = 0;
  std::vector<StepRecord> trace;
  std::set<ElementId> presented;
  std::map<ElementId, Rational> penalty_account;  // P(e) for every accepted e
  bool record_trace = true;

  AlgorithmState() = default;
  AlgorithmState(Params p, std::vector<MatroidDescriptor> ms) : params(std::move(p)), matroids(std::move(ms)) {
    if (static_cast<int>(matroids.size()) != params.k) {
      throw InputError("params.k = " + std::to_string(params.k) + " but " + std::to_string(matroids.size()) +
                       " matroids given");
    }
  }

  IdSet current_ids() const {
    IdSet out;
    out.reserve(current.size());
    for (const auto& e : current) out.push_back(e.id);
    return out;
  }

  Rational current_weight() const {
    Rational total = 0;
    for (const auto& e : current) total += e.weight.value();
    return total;
  }
};

inline Rational utility(const AlgorithmState& state) {
  Rational accepted = 0;
  Rational canceled = 0;
  for (const auto& e : state.accepted_log) accepted += e.weight.value();
  for (const auto& e : state.canceled_log) canceled += e.weight.value();
  Rational u = accepted - (1 + state.params.f) * canceled;
  u.canonicalize();
  return u;
}

inline Rational penalty_total(const AlgorithmState& state) {
  Rational canceled = 0;
  for (const auto& e : state.canceled_log) canceled += e.weight.value();
  Rational p = state.params.f * canceled;
  p.canonicalize();
  return p;
}

namespace detail {

inline void begin_step(AlgorithmState& state, const Element& e) {
  if (!state.presented.insert(e.id).second) {
    throw InputError("element " + std::to_string(e.id) + " was already presented");
  }
  ++state.step;
  if (!is_independent_in_all(state.matroids, state.current_ids())) {
    throw InvariantViolation("current set is dependent on entry to step " + std::to_string(state.step));
  }
}

inline std::vector<std::optional<IdSet>> capture_circuits(const AlgorithmState& state, const Element& e) {
  const IdSet s = state.current_ids();
  std::vector<std::optional<IdSet>> out;
  out.reserve(state.matroids.size());
  for (const auto& m : state.matroids) {
    out.push_back(is_true_matroid(m) ? circuit(m, s, e.id) : std::nullopt);
  }
  return out;
}

inline Decision apply_decision(AlgorithmState& state, const Element& e, Decision decision, StepRecord record) {
  if (decision.kind == DecisionKind::AcceptEvict) {
    Rational evicted_weight = 0;
    Rational inherited = 0;
    std::vector<Element> kept;
    for (const auto& x : state.current) {
      if (contains(decision.evicted, x.id)) {
        evicted_weight += x.weight.value();
        inherited += state.penalty_account[x.id];
        state.canceled_log.push_back(x);
      } else {
        kept.push_back(x);
      }
    }
    state.current = std::move(kept);
    state.penalty_account[e.id] = state.params.f * evicted_weight + inherited;
  } else if (decision.kind == DecisionKind::AcceptFree) {
    state.penalty_account[e.id] = 0;
  }
  if (decision.accepted()) {
    state.accepted_log.push_back(e);
    state.current.insert(std::lower_bound(state.current.begin(), state.current.end(), e,
                                          [](const Element& a, const Element& b) { return a.id < b.id; }),
                         e);
    if (!is_independent_in_all(state.matroids, state.current_ids())) {
      throw InvariantViolation("step " + std::to_string(state.step) + " left a dependent set");
    }
  }
  record.step = state.step;
  record.element = e;
  record.decision = decision;
  if (state.record_trace) state.trace.push_back(std::move(record));
  return decision;
}

// Common prefix of both variants: loops are rejected, free additions accepted.
inline std::optional<Decision> trivial_decision(AlgorithmState& state, const Element& e, StepRecord& record) {
  for (const auto& m : state.matroids) {
    if (is_loop(m, e.id)) {
      record.loop = true;
      return apply_decision(state, e, Decision{DecisionKind::Reject, {}}, std::move(record));
    }
  }
  IdSet joined = with_element(state.current_ids(), e.id);
  if (is_independent_in_all(state.matroids, joined)) {
    record.circuits.assign(state.matroids.size(), std::nullopt);
    return apply_decision(state, e, Decision{DecisionKind::AcceptFree, {}}, std::move(record));
  }
  return std::nullopt;
}

}  // namespace detail

/// Algorithm 1: per-matroid lightest eviction, accept iff w_e >= r * sum of evictees.
inline Decision process_element(AlgorithmState& state, const Element& e) {
  detail::begin_step(state, e);
  StepRecord record;
  if (auto d = detail::trivial_decision(state, e, record)) return *d;

  record.circuits = detail::capture_circuits(state, e);
  Rational threshold_sum = 0;
  std::vector<ElementId> evict;
  for (std::size_t j = 0; j < state.matroids.size(); ++j) {
    std::optional<ElementId> candidate;
    if (const auto& c = record.circuits[j]) {
      const Weight* best_w = nullptr;
      for (const auto& x : state.current) {
        if (!contains(*c, x.id)) continue;
        if (!candidate || x.weight < *best_w || (x.weight == *best_w && x.id < *candidate)) {
          candidate = x.id;
          best_w = &x.weight;
        }
      }
      threshold_sum += best_w->value();
      evict.push_back(*candidate);
    }
    record.candidates.push_back(candidate);
  }

  Decision decision;
  if (e.weight.value() >= state.params.r * threshold_sum) {
    decision = Decision{DecisionKind::AcceptEvict, make_id_set(std::move(evict))};
  }
  return detail::apply_decision(state, e, std::move(decision), std::move(record));
}

/// Offline greedy over the joint constraint: descending weight, ties to smaller id.
inline IdSet greedy_independent(std::span<const MatroidDescriptor> matroids, std::vector<Element> pool) {
  std::sort(pool.begin(), pool.end(), [](const Element& a, const Element& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.id < b.id;
  });
  IdSet kept;
  for (const auto& x : pool) {
    IdSet trial = with_element(kept, x.id);
    if (is_independent_in_all(matroids, trial)) kept = std::move(trial);
  }
  return kept;
}

/// Algorithm 2: C_e = (S + e) minus greedy(S + e); accept iff e survives and w_e >= r * w(C_e).
inline Decision process_element_greedy(AlgorithmState& state, const Element& e) {
  detail::begin_step(state, e);
  StepRecord record;
  if (auto d = detail::trivial_decision(state, e, record)) return *d;

  record.circuits = detail::capture_circuits(state, e);
  std::vector<Element> pool = state.current;
  pool.push_back(e);
  const IdSet kept = greedy_independent(state.matroids, pool);

  Decision decision;
  if (contains(kept, e.id)) {
    IdSet dropped;
    Rational dropped_weight = 0;
    for (const auto& x : state.current) {
      if (!contains(kept, x.id)) {
        dropped.push_back(x.id);
        dropped_weight += x.weight.value();
      }
    }
    if (e.weight.value() >= state.params.r * dropped_weight) {
      decision = Decision{DecisionKind::AcceptEvict, make_id_set(std::move(dropped))};
    }
  }
  return detail::apply_decision(state, e, std::move(decision), std::move(record));
}

/// Holds at most one element; swaps iff the newcomer is feasible and w_new >= r * w_held.
inline Decision process_single_element(AlgorithmState& state, const Element& e) {
  detail::begin_step(state, e);
  StepRecord record;
  record.circuits.assign(state.matroids.size(), std::nullopt);
  const ElementId single[] = {e.id};
  if (!is_independent_in_all(state.matroids, single)) {
    record.loop = true;
    return detail::apply_decision(state, e, Decision{DecisionKind::Reject, {}}, std::move(record));
  }
  if (state.current.empty()) {
    return detail::apply_decision(state, e, Decision{DecisionKind::AcceptFree, {}}, std::move(record));
  }
  const Element& held = state.current.front();
  Decision decision;
  if (e.weight.value() >= state.params.r * held.weight.value()) {
    decision = Decision{DecisionKind::AcceptEvict, IdSet{held.id}};
  }
  return detail::apply_decision(state, e, std::move(decision), std::move(record));
}

inline Decision process(AlgorithmState& state, const Element& e, Variant variant) {
  switch (variant) {
    case Variant::Algorithm1: return process_element(state, e);
    case Variant::Algorithm2: return process_element_greedy(state, e);
    case Variant::SingleElement: return process_single_element(state, e);
  }
  throw InputError("unknown variant");
}

/// Deterministic engine with snapshot/restore, the surface adversaries drive.
class BuybackEngine {
 public:
  class Snapshot {
   public:
    Snapshot() = default;

   private:
    friend class BuybackEngine;
    Snapshot(std::string tag, AlgorithmState s) : tag_(std::move(tag)), state_(std::move(s)) {}
    std::string tag_;
    AlgorithmState state_;
  };

  BuybackEngine(Params params, std::vector<MatroidDescriptor> matroids, Variant variant = Variant::Algorithm1)
      : state_(std::move(params), std::move(matroids)), variant_(variant) {}

  Decision process(const Element& e) { return buyback::process(state_, e, variant_); }

  Snapshot snapshot() const { return Snapshot(fingerprint(), state_); }

  void restore(const Snapshot& token) {
    if (token.tag_.empty() || token.tag_ != fingerprint()) {
      throw InputError("snapshot token does not belong to this engine's instance");
    }
    state_ = token.state_;
  }

  const AlgorithmState& state() const { return state_; }
  // Adversaries reveal matroid membership of newly arriving elements through this.
  AlgorithmState& mutable_state() { return state_; }
  Variant variant() const { return variant_; }
  Rational utility() const { return buyback::utility(state_); }

 private:
  std::string fingerprint() const {
    std::string tag = std::string(to_string(variant_)) + "|k=" + std::to_string(state_.params.k) +
                      "|f=" + to_fraction_string(state_.params.f) + "|r=" + to_fraction_string(state_.params.r);
    for (const auto& m : state_.matroids) tag += "|" + kind_name(m);
    return tag;
  }

  AlgorithmState state_;
  Variant variant_;
};

struct RunReport {
  Params params;
  Variant variant = Variant::Algorithm1;
  std::vector<StepRecord> trace;
  IdSet final_set;
  Rational final_weight{0};
  Rational utility{0};
  Rational penalty_total{0};
  std::map<ElementId, Rational> penalty_account;
  std::optional<Rational> opt_weight;
  std::optional<Rational> observed_ratio;
};

inline RunReport make_report(const AlgorithmState& state, Variant variant) {
  RunReport report;
  report.params = state.params;
  report.variant = variant;
  report.trace = state.trace;
  report.final_set = state.current_ids();
  report.final_weight = state.current_weight();
  report.utility = utility(state);
  report.penalty_total = penalty_total(state);
  report.penalty_account = state.penalty_account;
  return report;
}

inline AlgorithmState initial_state(const Instance& inst, Variant variant) {
  validate(inst);
  Params params = Params::from_instance(inst);
  if (variant == Variant::SingleElement) {
    // single-element rule always uses the k = 1 threshold
    params.r = inst.threshold_r ? inst.threshold_r->value() : optimal_r_rational(1, inst.penalty_f.value());
  }
  return AlgorithmState(std::move(params), inst.matroids);
}

inline RunReport run_stream(const Instance& inst, Variant variant) {
  if (variant != Variant::SingleElement && !inst.all_true_matroids()) {
    throw InputError("set-family constraints need the single_element variant");
  }
  AlgorithmState state = initial_state(inst, variant);
  for (const auto& e : inst.stream()) process(state, e, variant);
  return make_report(state, variant);
}

/// Single-element baseline for general downward-closed systems.
inline RunReport single_element_baseline(const Instance& inst) { return run_stream(inst, Variant::SingleElement); }

/// Attaches OPT and the observed OPT/utility ratio (absent when utility <= 0).
inline void attach_opt(RunReport& report, const Rational& opt_weight) {
  report.opt_weight = opt_weight;
  if (sgn(report.utility) > 0) {
    Rational ratio = opt_weight / report.utility;
    ratio.canonicalize();
    report.observed_ratio = ratio;
  } else {
    report.observed_ratio.reset();
  }
}

struct PenaltyCheck {
  bool per_element_ok = true;
  bool total_ok = true;
  bool accounting_ok = true;  // sum of P over S(n) equals the penalty actually paid
  std::vector<ElementId> violators;
};

/// P(e) <= f w_e / (r - 1) for every accepted e, and total <= f w(S(n)) / (r - 1). Needs r > 1.
inline PenaltyCheck check_penalty_bound(const RunReport& report, const std::map<ElementId, Rational>& weights) {
  PenaltyCheck out;
  const Rational& r = report.params.r;
  const Rational& f = report.params.f;
  if (!(r > 1)) throw DomainError("penalty bound needs r > 1");
  for (const auto& [id, p] : report.penalty_account) {
    if (p * (r - 1) > f * weights.at(id)) {
      out.per_element_ok = false;
      out.violators.push_back(id);
    }
  }
  if (report.penalty_total * (r - 1) > f * report.final_weight) out.total_ok = false;
  Rational sum = 0;
  for (ElementId id : report.final_set) sum += report.penalty_account.at(id);
  out.accounting_ok = (sum == report.penalty_total);
  return out;
}

}  // namespace buyback

#endif  // BUYBACK_ENGINE_HPP
