#ifndef BUYBACK_CHARGE_AUDITOR_HPP
#define BUYBACK_CHARGE_AUDITOR_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "buyback/bipartite_matching.hpp"
#include "buyback/engine.hpp"
#include "buyback/offline.hpp"

namespace buyback {

/// One bipartite graph per matroid. Left side P1(p) holds OPT elements that
/// left S; right side P2(p) is implicit (a node exists while it has edges).
struct ChargeGraph {
  std::set<ElementId> left;
  std::set<std::pair<ElementId, ElementId>> edges;  // (left, right)
  std::set<ElementId> deleted_right;                // removed from P2(p) by an eviction for p
  std::map<ElementId, ElementId> matching;          // M_p, filled by match()

  IdSet neighbors(ElementId q) const {
    IdSet out;
    for (auto it = edges.lower_bound({q, 0}); it != edges.end() && it->first == q; ++it) out.push_back(it->second);
    return out;
  }

  IdSet neighbors(const IdSet& qs) const {
    IdSet out;
    for (ElementId q : qs) {
      const IdSet n = neighbors(q);
      out.insert(out.end(), n.begin(), n.end());
    }
    return make_id_set(std::move(out));
  }

  IdSet right() const {
    IdSet out;
    for (const auto& [q, x] : edges) out.push_back(x);
    return make_id_set(std::move(out));
  }
};

/// The k charge graphs, built event by event alongside an Algorithm 1 run.
class ChargeGraphs {
 public:
  ChargeGraphs(std::vector<MatroidDescriptor> matroids, IdSet opt)
      : matroids_(std::move(matroids)), opt_(std::move(opt)), graphs_(matroids_.size()) {}

  /// Applies one step. Steps must arrive consecutively from 1.
  void record_event(const StepRecord& ev) {
    if (ev.step != last_step_ + 1) {
      throw PreconditionError("charge graphs: expected step " + std::to_string(last_step_ + 1) + ", got " +
                              std::to_string(ev.step));
    }
    last_step_ = ev.step;
    const ElementId e = ev.element.id;
    const std::size_t k = graphs_.size();
    if (ev.decision.kind != DecisionKind::AcceptFree && !ev.loop &&
        (ev.circuits.size() != k || ev.candidates.size() != k)) {
      throw PreconditionError("charge graphs: step " + std::to_string(ev.step) + " lacks per-matroid circuits");
    }

    if (ev.decision.kind == DecisionKind::Reject && !ev.loop && in_opt(e)) {
      for (std::size_t p = 0; p < k; ++p) {
        if (!ev.circuits[p]) continue;  // no circuit: no node in this graph
        auto& g = graphs_[p];
        g.left.insert(e);
        for (ElementId x : *ev.circuits[p]) {
          if (x != e) g.edges.insert({e, x});
        }
      }
    } else if (ev.decision.kind == DecisionKind::AcceptEvict) {
      for (std::size_t p = 0; p < k; ++p) {
        if (!ev.candidates[p]) continue;
        const ElementId gone = *ev.candidates[p];
        const IdSet& ckt = *ev.circuits[p];
        auto& g = graphs_[p];
        std::vector<ElementId> rewired;
        for (auto it = g.edges.begin(); it != g.edges.end();) {
          if (it->second == gone) {
            rewired.push_back(it->first);
            it = g.edges.erase(it);
          } else {
            ++it;
          }
        }
        g.deleted_right.insert(gone);
        for (ElementId q : rewired) {
          for (ElementId x : ckt) {
            if (x != gone) g.edges.insert({q, x});
          }
        }
        if (in_opt(gone)) {
          g.left.insert(gone);
          for (ElementId x : ckt) {
            if (x != gone) g.edges.insert({gone, x});
          }
        }
      }
    }
    check_single_span(ev.step);
  }

  /// Max matching from P1(p), in id order, into P2(p) \ OPT.
  void match() {
    for (auto& g : graphs_) {
      std::map<ElementId, std::vector<ElementId>> adjacency;
      std::vector<ElementId> lefts(g.left.begin(), g.left.end());
      for (ElementId q : lefts) {
        for (ElementId x : g.neighbors(q)) {
          if (!in_opt(x)) adjacency[q].push_back(x);
        }
      }
      g.matching = max_bipartite_matching(lefts, adjacency);
    }
  }

  const std::vector<ChargeGraph>& graphs() const { return graphs_; }
  const std::vector<MatroidDescriptor>& matroids() const { return matroids_; }
  const IdSet& opt() const { return opt_; }
  bool in_opt(ElementId id) const { return contains(opt_, id); }
  std::size_t last_step() const { return last_step_; }
  const std::vector<std::string>& intermediate_flags() const { return flags_; }

 private:
  // Intermediate-state span anomalies are flagged, not failed.
  void check_single_span(std::size_t step) {
    for (std::size_t p = 0; p < graphs_.size(); ++p) {
      const auto& g = graphs_[p];
      for (ElementId q : g.left) {
        const IdSet n = g.neighbors(q);
        if (rank(matroids_[p], n) != rank(matroids_[p], with_element(n, q))) {
          flags_.push_back("step " + std::to_string(step) + ": graph " + std::to_string(p) + ": node " +
                           std::to_string(q) + " not spanned by its neighbors");
        }
      }
    }
  }

  std::vector<MatroidDescriptor> matroids_;
  IdSet opt_;
  std::vector<ChargeGraph> graphs_;
  std::size_t last_step_ = 0;
  std::vector<std::string> flags_;
};

struct ChargeGraphReport {
  bool left_outside_final = true;  // (1) P1(p) subset of OPT \ S(n)
  bool span = true;                // (2)
  bool hall = true;                // (3)
  bool saturating_matching = true; // (4)
  bool right_multiplicity = true;  // (5) non-OPT, non-final elements matched <= k-1 times
  std::vector<std::string> witnesses;
  std::vector<std::string> intermediate_flags;

  bool all() const { return left_outside_final && span && hall && saturating_matching && right_multiplicity; }
};

constexpr std::size_t kExhaustiveHallLimit = 12;

inline ChargeGraphReport verify_charge_graphs(const ChargeGraphs& cg, const IdSet& final_set, const IdSet& ground,
                                  std::uint64_t seed = 0x5eed) {
  ChargeGraphReport rep;
  rep.intermediate_flags = cg.intermediate_flags();
  const auto& graphs = cg.graphs();
  const std::size_t k = graphs.size();

  for (std::size_t p = 0; p < k; ++p) {
    const auto& g = graphs[p];
    const auto& m = cg.matroids()[p];
    const std::string tag = "graph " + std::to_string(p) + ": ";
    const IdSet lefts(g.left.begin(), g.left.end());

    for (ElementId q : lefts) {
      if (!cg.in_opt(q) || contains(final_set, q)) {
        rep.left_outside_final = false;
        rep.witnesses.push_back(tag + "left node " + std::to_string(q) + " not in OPT \\ S(n)");
      }
      const IdSet n = g.neighbors(q);
      if (rank(m, n) != rank(m, with_element(n, q))) {
        rep.span = false;
        rep.witnesses.push_back(tag + "node " + std::to_string(q) + " not spanned by its neighbors");
      }
    }

    auto check_subset = [&](const IdSet& sub) {
      const IdSet n = g.neighbors(sub);
      IdSet joined = n;
      joined.insert(joined.end(), sub.begin(), sub.end());
      joined = make_id_set(std::move(joined));
      if (rank(m, n) != rank(m, joined)) {
        rep.span = false;
        rep.witnesses.push_back(tag + "neighbors do not span a left subset of size " + std::to_string(sub.size()));
      }
      std::size_t outside = 0;
      for (ElementId x : n) outside += cg.in_opt(x) ? 0 : 1;
      if (outside < sub.size()) {
        rep.hall = false;
        rep.witnesses.push_back(tag + "Hall deficiency on a left subset of size " + std::to_string(sub.size()));
      }
    };

    const bool exhaustive = lefts.size() <= kExhaustiveHallLimit;
    if (exhaustive) {
      for (std::uint32_t mask = 1; mask < (1u << lefts.size()); ++mask) {
        IdSet sub;
        for (std::size_t i = 0; i < lefts.size(); ++i) {
          if (mask & (1u << i)) sub.push_back(lefts[i]);
        }
        check_subset(sub);
      }
    } else {
      std::mt19937_64 rng(seed + p);
      for (int trial = 0; trial < 64; ++trial) {
        IdSet sub;
        for (ElementId q : lefts) {
          if (rng() & 1u) sub.push_back(q);
        }
        if (sub.empty()) continue;
        // span only; Hall is decided by the matching below
        const IdSet n = g.neighbors(sub);
        IdSet joined = n;
        joined.insert(joined.end(), sub.begin(), sub.end());
        if (rank(m, n) != rank(m, make_id_set(std::move(joined)))) {
          rep.span = false;
          rep.witnesses.push_back(tag + "neighbors do not span a sampled left subset");
        }
      }
    }

    bool saturated = g.matching.size() == lefts.size();
    for (const auto& [q, x] : g.matching) {
      if (cg.in_opt(x) || !g.edges.count({q, x})) saturated = false;
    }
    if (!saturated) {
      rep.saturating_matching = false;
      rep.witnesses.push_back(tag + "matching covers " + std::to_string(g.matching.size()) + " of " +
                              std::to_string(lefts.size()) + " left nodes");
      if (!exhaustive) rep.hall = false;
    }
  }

  std::map<ElementId, std::size_t> times_matched;
  for (const auto& g : graphs) {
    for (const auto& [q, x] : g.matching) ++times_matched[x];
  }
  for (ElementId x : ground) {
    if (contains(final_set, x) || cg.in_opt(x)) continue;
    if (k >= 1 && times_matched[x] > k - 1) {
      rep.right_multiplicity = false;
      rep.witnesses.push_back("element " + std::to_string(x) + " matched " + std::to_string(times_matched[x]) +
                              " times from the right side");
    }
  }
  return rep;
}

struct Ch1Transfer {
  ElementId source = 0;
  std::size_t graph = 0;
  std::size_t step = 0;  // step at which the source left S
  Rational amount{0};
};

struct ChargeLedger {
  std::map<ElementId, Rational> ch1;
  std::map<ElementId, Rational> ch2;
  std::map<ElementId, Rational> ch2_at_deletion;
  std::map<ElementId, std::size_t> deletion_step;
  std::map<ElementId, std::vector<Ch1Transfer>> ch1_received;
  std::vector<Rational> conservation_residual;  // after each step, and once more after final delivery
  std::vector<std::string> causality_violations;
  Rational opt_weight{0};

  Rational charge(ElementId id) const {
    Rational total = 0;
    if (auto it = ch1.find(id); it != ch1.end()) total += it->second;
    if (auto it = ch2.find(id); it != ch2.end()) total += it->second;
    return total;
  }
};

/// Replays the trace moving charge by the three transfer rules.
///
/// A ch1 transfer to M_l(e) is held in flight until the receiver is deleted
/// (delivered into its ch2 just before that ch2 moves on) or the run ends.
/// An element evicted for several matroids splits its ch1 equally among
/// the graphs it joined.
inline ChargeLedger transfer_charges(const std::vector<StepRecord>& trace, const ChargeGraphs& cg,
                                     const std::map<ElementId, Rational>& weights) {
  ChargeLedger led;
  const auto& graphs = cg.graphs();
  for (const auto& [id, w] : weights) {
    led.ch1[id] = cg.in_opt(id) ? w : Rational(0);
    led.ch2[id] = 0;
    if (cg.in_opt(id)) led.opt_weight += w;
  }
  std::map<ElementId, std::vector<Ch1Transfer>> in_flight;
  std::set<ElementId> deleted;

  auto send = [&](ElementId source, std::size_t graph, std::size_t step, const Rational& amount) {
    const auto& mm = graphs[graph].matching;
    auto it = mm.find(source);
    if (it == mm.end()) {
      throw PreconditionError("transfer_charges: left node " + std::to_string(source) + " unmatched in graph " +
                              std::to_string(graph));
    }
    if (deleted.count(it->second)) {
      led.causality_violations.push_back("step " + std::to_string(step) + ": transfer to already deleted element " +
                                         std::to_string(it->second));
    }
    Rational a = amount;
    a.canonicalize();
    in_flight[it->second].push_back(Ch1Transfer{source, graph, step, a});
  };

  auto deliver = [&](ElementId target) {
    auto it = in_flight.find(target);
    if (it == in_flight.end()) return;
    for (auto& t : it->second) {
      led.ch2[target] += t.amount;
      led.ch1_received[target].push_back(t);
    }
    in_flight.erase(it);
  };

  auto residual = [&]() {
    Rational total = 0;
    for (const auto& [id, v] : led.ch1) total += v;
    for (const auto& [id, v] : led.ch2) total += v;
    for (const auto& [id, ts] : in_flight) {
      for (const auto& t : ts) total += t.amount;
    }
    Rational r = total - led.opt_weight;
    r.canonicalize();
    return r;
  };

  for (const auto& ev : trace) {
    const ElementId e = ev.element.id;
    if (ev.decision.kind == DecisionKind::Reject && !ev.loop && cg.in_opt(e)) {
      Rational denom = 0;
      for (std::size_t l = 0; l < ev.candidates.size(); ++l) {
        if (ev.candidates[l]) denom += weights.at(*ev.candidates[l]);
      }
      const Rational amount = led.ch1[e];
      if (sgn(denom) > 0) {
        for (std::size_t l = 0; l < ev.candidates.size(); ++l) {
          if (!ev.candidates[l]) continue;
          send(e, l, ev.step, amount * weights.at(*ev.candidates[l]) / denom);
        }
        led.ch1[e] = 0;
      }
    } else if (ev.decision.kind == DecisionKind::AcceptEvict) {
      for (ElementId x : ev.decision.evicted) {
        if (!cg.in_opt(x)) continue;
        std::vector<std::size_t> joined;
        for (std::size_t l = 0; l < ev.candidates.size(); ++l) {
          if (ev.candidates[l] == x) joined.push_back(l);
        }
        if (joined.empty()) continue;
        const Rational share = led.ch1[x] / Rational(static_cast<long>(joined.size()));
        for (std::size_t l : joined) send(x, l, ev.step, share);
        led.ch1[x] = 0;
      }
      for (ElementId x : ev.decision.evicted) {
        deliver(x);
        led.ch2_at_deletion[x] = led.ch2[x];
        led.deletion_step[x] = ev.step;
        led.ch2[e] += led.ch2[x];
        led.ch2[x] = 0;
        deleted.insert(x);
      }
    }
    led.conservation_residual.push_back(residual());
  }

  std::vector<ElementId> remaining;
  for (const auto& [id, ts] : in_flight) remaining.push_back(id);
  for (ElementId id : remaining) {
    if (deleted.count(id)) {
      led.causality_violations.push_back("charge stranded on deleted element " + std::to_string(id));
    }
    deliver(id);
  }
  led.conservation_residual.push_back(residual());
  return led;
}

struct BoundEntry {
  ElementId id = 0;
  std::string kind;  // "deleted_ch2" or "final_ch"
  Rational charge{0};
  Rational bound{0};
  bool ok = true;
};

struct ChargeBoundsReport {
  bool deleted_ok = true;
  bool final_ok = true;
  bool sum_ok = true;
  bool final_weight_ok = true;  // w(S(n)) (kr-1)r/(r-1) >= w(OPT)
  bool transfer_size_ok = true;
  bool transfer_count_ok = true;
  bool conservation_ok = true;
  bool causality_ok = true;
  std::vector<BoundEntry> entries;
  Rational max_abs_residual{0};

  bool all() const {
    return deleted_ok && final_ok && sum_ok && final_weight_ok && transfer_size_ok && transfer_count_ok &&
           conservation_ok && causality_ok;
  }
};

inline ChargeBoundsReport verify_charge_bounds(const ChargeLedger& led, const IdSet& final_set,
                                               const std::map<ElementId, Rational>& weights, const Params& params,
                                               const IdSet& opt) {
  const Rational& r = params.r;
  if (!(r > 1)) throw DomainError("charge bounds need r > 1");
  const int k = params.k;
  Rational deleted_factor = Rational(k - 1) * r * r / (r - 1);
  Rational final_factor = final_weight_factor(k, r);
  deleted_factor.canonicalize();

  ChargeBoundsReport rep;
  for (const auto& [id, c2] : led.ch2_at_deletion) {
    BoundEntry be{id, "deleted_ch2", c2, deleted_factor * weights.at(id), true};
    be.bound.canonicalize();
    be.ok = be.charge <= be.bound;
    rep.deleted_ok = rep.deleted_ok && be.ok;
    rep.entries.push_back(std::move(be));
  }
  Rational sum = 0;
  Rational final_w = 0;
  for (ElementId id : final_set) {
    BoundEntry be{id, "final_ch", led.charge(id), final_factor * weights.at(id), true};
    be.bound.canonicalize();
    be.ok = be.charge <= be.bound;
    rep.final_ok = rep.final_ok && be.ok;
    sum += be.charge;
    final_w += weights.at(id);
    rep.entries.push_back(std::move(be));
  }
  rep.sum_ok = (sum == led.opt_weight);
  rep.final_weight_ok = final_w * final_factor >= led.opt_weight;

  for (const auto& [id, ts] : led.ch1_received) {
    for (const auto& t : ts) {
      if (t.amount > r * weights.at(id)) rep.transfer_size_ok = false;
    }
    if (!contains(final_set, id) && !contains(opt, id) && ts.size() > static_cast<std::size_t>(k - 1)) {
      rep.transfer_count_ok = false;
    }
  }
  for (const auto& res : led.conservation_residual) {
    Rational a = abs(res);
    if (a > rep.max_abs_residual) rep.max_abs_residual = a;
  }
  rep.conservation_ok = sgn(rep.max_abs_residual) == 0;
  rep.causality_ok = led.causality_violations.empty();
  return rep;
}

struct AuditReport {
  ChargeGraphReport graphs;
  ChargeLedger ledger;
  ChargeBoundsReport bounds;
  OptResult opt;
  IdSet final_set;
  std::string error;  // set when the charge transfer could not run

  bool passed() const { return error.empty() && graphs.all() && bounds.all(); }
};

/// Runs Algorithm 1 on the instance with full auditing. Needs n small enough
/// for brute_opt and r > 1.
inline AuditReport audit_instance(const Instance& inst) {
  AuditReport out;
  const RunReport run = run_stream(inst, Variant::Algorithm1);
  out.opt = brute_opt(inst);
  out.final_set = run.final_set;

  std::map<ElementId, Rational> weights;
  IdSet ground;
  for (const auto& e : inst.elements) {
    weights[e.id] = e.weight.value();
    ground.push_back(e.id);
  }
  ground = make_id_set(std::move(ground));

  ChargeGraphs cg(inst.matroids, out.opt.set);
  for (const auto& ev : run.trace) cg.record_event(ev);
  cg.match();
  out.graphs = verify_charge_graphs(cg, run.final_set, ground);
  try {
    out.ledger = transfer_charges(run.trace, cg, weights);
    out.bounds = verify_charge_bounds(out.ledger, run.final_set, weights, run.params, out.opt.set);
  } catch (const PreconditionError& ex) {
    out.error = ex.what();
  }
  return out;
}

}  // namespace buyback

#endif  // BUYBACK_CHARGE_AUDITOR_HPP
