#ifndef BUYBACK_JSON_IO_HPP
#define BUYBACK_JSON_IO_HPP

#include <cmath>
#include <cstdio>
#include <istream>
#include <iterator>
#include <limits>
#include <regex>
#include <string>

#include "json.hpp"

#include "buyback/adversary.hpp"
#include "buyback/batch.hpp"
#include "buyback/charge_auditor.hpp"
#include "buyback/engine.hpp"
#include "buyback/generator.hpp"
#include "buyback/instance.hpp"
#include "buyback/offline.hpp"

namespace buyback {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Float fields are written with 17 significant digits. nlohmann prints the
// shortest round-trip form, so floats go out as tagged strings and are
// substituted after dumping.

namespace detail {

constexpr const char* kFloatTag = "\x01" "f17:";

}  // namespace detail

inline Json float17(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(detail::kFloatTag) + buf;
}

inline std::string dump_json(const Json& j, int indent = 2) {
  static const std::regex tagged("\"\\\\u0001f17:([^\"]*)\"");
  return std::regex_replace(j.dump(indent), tagged, "$1");
}

/// Parses JSON text; syntax errors become InputError carrying the position.
inline Json parse_json_text(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw InputError(source + ": " + ex.what());
  }
}

inline Json read_json_stream(std::istream& in, const std::string& source) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_json_text(text, source);
}

inline Json json_of(const Rational& q) { return to_fraction_string(q); }
inline Json json_of(const Weight& w) { return w.str(); }

inline Json json_of(const IdSet& s) {
  Json a = Json::array();
  for (ElementId id : s) a.push_back(id);
  return a;
}

// ---------------------------------------------------------------------------
// Reading. Errors name the offending JSON path.

namespace detail {

inline const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw InputError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path + ": missing field '" + key + "'");
  return *it;
}

inline std::uint64_t read_uint(const Json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw InputError(path + ": expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

inline bool read_bool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) throw InputError(path + ": expected true or false");
  return v.get<bool>();
}

inline ElementId read_id(const Json& v, const std::string& path) {
  const auto x = read_uint(v, path);
  if (x > std::numeric_limits<ElementId>::max()) throw InputError(path + ": id out of range");
  return static_cast<ElementId>(x);
}

inline ElementId read_id_key(const std::string& key, const std::string& path) {
  if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError(path + ": key '" + key + "' is not an element id");
  }
  return read_id(Json(std::stoull(key)), path);
}

inline Rational read_rational(const Json& v, const std::string& path) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
    if (v.is_number_unsigned()) return Rational(std::to_string(v.get<unsigned long long>()));
    if (v.is_number_float()) return parse_rational(v.dump());  // 0.1 means 1/10
  } catch (const Error& ex) {
    throw InputError(path + ": " + ex.what());
  }
  throw InputError(path + ": expected a \"num/den\" string");
}

inline Weight read_weight(const Json& v, const std::string& path) {
  const Rational q = read_rational(v, path);
  if (sgn(q) < 0) throw InputError(path + ": weight must be nonnegative");
  return Weight(q);
}

inline IdSet read_id_list(const Json& v, const std::string& path) {
  if (!v.is_array()) throw InputError(path + ": expected an array of ids");
  IdSet out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_id(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline MatroidDescriptor matroid_from_json(const Json& j, const std::string& path) {
  using namespace detail;
  const Json& t = field(j, "type", path);
  if (!t.is_string()) throw InputError(path + ".type: expected a string");
  const std::string type = t.get<std::string>();
  if (type == "uniform") {
    return buyback::Uniform{static_cast<std::size_t>(read_uint(field(j, "rank", path), path + ".rank"))};
  }
  if (type == "partition") {
    Partition p;
    const Json& classes = field(j, "classes", path);
    if (!classes.is_object()) throw InputError(path + ".classes: expected an object");
    for (auto it = classes.begin(); it != classes.end(); ++it) {
      const std::string sub = path + ".classes." + it.key();
      p.class_of[read_id_key(it.key(), sub)] = static_cast<std::size_t>(read_uint(it.value(), sub));
    }
    const Json& caps = field(j, "capacities", path);
    if (!caps.is_array()) throw InputError(path + ".capacities: expected an array");
    for (std::size_t i = 0; i < caps.size(); ++i) {
      p.capacity.push_back(static_cast<std::size_t>(read_uint(caps[i], path + ".capacities[" + std::to_string(i) + "]")));
    }
    return p;
  }
  if (type == "graphic") {
    Graphic g;
    g.vertex_count = static_cast<std::size_t>(read_uint(field(j, "vertices", path), path + ".vertices"));
    const Json& ends = field(j, "endpoints", path);
    if (!ends.is_object()) throw InputError(path + ".endpoints: expected an object");
    for (auto it = ends.begin(); it != ends.end(); ++it) {
      const std::string sub = path + ".endpoints." + it.key();
      if (!it.value().is_array() || it.value().size() != 2) throw InputError(sub + ": expected [u, v]");
      g.endpoints[read_id_key(it.key(), sub)] = {static_cast<std::size_t>(read_uint(it.value()[0], sub + "[0]")),
                                                 static_cast<std::size_t>(read_uint(it.value()[1], sub + "[1]"))};
    }
    return g;
  }
  if (type == "family") {
    ExplicitFamily fam;
    const Json& sets = field(j, "maximal", path);
    if (!sets.is_array()) throw InputError(path + ".maximal: expected an array");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      fam.maximal_sets.push_back(make_id_set(read_id_list(sets[i], path + ".maximal[" + std::to_string(i) + "]")));
    }
    return fam;
  }
  throw InputError(path + ".type: unknown matroid type '" + type + "'");
}

inline Json matroid_to_json(const MatroidDescriptor& desc) {
  return std::visit(
      [](const auto& m) -> Json {
        using T = std::decay_t<decltype(m)>;
        Json j;
        if constexpr (std::is_same_v<T, buyback::Uniform>) {
          j["type"] = "uniform";
          j["rank"] = m.rank;
        } else if constexpr (std::is_same_v<T, Partition>) {
          j["type"] = "partition";
          Json classes = Json::object();
          for (const auto& [id, c] : m.class_of) classes[std::to_string(id)] = c;
          j["classes"] = classes;
          j["capacities"] = m.capacity;
        } else if constexpr (std::is_same_v<T, Graphic>) {
          j["type"] = "graphic";
          j["vertices"] = m.vertex_count;
          Json ends = Json::object();
          for (const auto& [id, uv] : m.endpoints) ends[std::to_string(id)] = {uv.first, uv.second};
          j["endpoints"] = ends;
        } else {
          j["type"] = "family";
          Json sets = Json::array();
          for (const auto& s : m.maximal_sets) sets.push_back(json_of(s));
          j["maximal"] = sets;
        }
        return j;
      },
      desc);
}

inline Instance instance_from_json(const Json& j) {
  using namespace detail;
  Instance inst;
  if (!j.is_object()) throw InputError("instance: expected an object");
  if (j.contains("f")) inst.penalty_f = read_weight(j["f"], "f");
  if (j.contains("r")) {
    const Json& r = j["r"];
    if (!(r.is_string() && r.get<std::string>() == "optimal")) inst.threshold_r = read_weight(r, "r");
  }
  const Json& elems = field(j, "elements", "instance");
  if (!elems.is_array()) throw InputError("elements: expected an array");
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const std::string p = "elements[" + std::to_string(i) + "]";
    inst.elements.push_back(Element{read_id(field(elems[i], "id", p), p + ".id"),
                                    read_weight(field(elems[i], "weight", p), p + ".weight")});
  }
  const Json& ms = field(j, "matroids", "instance");
  if (!ms.is_array()) throw InputError("matroids: expected an array");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    inst.matroids.push_back(matroid_from_json(ms[i], "matroids[" + std::to_string(i) + "]"));
  }
  if (j.contains("k")) {
    const auto k = read_uint(j["k"], "k");
    if (k != inst.matroids.size()) {
      throw InputError("k: declared " + std::to_string(k) + " but " + std::to_string(inst.matroids.size()) +
                       " matroids given");
    }
  }
  if (j.contains("order")) {
    inst.arrival_order = read_id_list(j["order"], "order");
  } else {
    for (const auto& e : inst.elements) inst.arrival_order.push_back(e.id);  // listing order
  }
  validate(inst);
  return inst;
}

inline Json instance_to_json(const Instance& inst) {
  Json j;
  j["k"] = inst.k();
  j["f"] = json_of(inst.penalty_f);
  j["r"] = inst.threshold_r ? json_of(*inst.threshold_r) : Json("optimal");
  Json elems = Json::array();
  for (const auto& e : inst.elements) elems.push_back({{"id", e.id}, {"weight", e.weight.str()}});
  j["elements"] = elems;
  Json ms = Json::array();
  for (const auto& m : inst.matroids) ms.push_back(matroid_to_json(m));
  j["matroids"] = ms;
  j["order"] = inst.arrival_order;
  return j;
}

// ---------------------------------------------------------------------------
// Reports.

inline Json decision_to_json(const Decision& d) {
  Json j;
  j["kind"] = to_string(d.kind);
  if (d.kind == DecisionKind::AcceptEvict) j["evicted"] = json_of(d.evicted);
  return j;
}

inline Json run_report_to_json(const RunReport& rep, bool with_trace = true) {
  Json j;
  j["variant"] = to_string(rep.variant);
  j["k"] = rep.params.k;
  j["f"] = json_of(rep.params.f);
  j["r"] = json_of(rep.params.r);
  if (with_trace) {
    Json trace = Json::array();
    for (const auto& st : rep.trace) {
      Json s;
      s["step"] = st.step;
      s["element"] = st.element.id;
      s["weight"] = st.element.weight.str();
      s["decision"] = decision_to_json(st.decision);
      if (st.loop) s["loop"] = true;
      trace.push_back(s);
    }
    j["trace"] = trace;
  }
  j["final_set"] = json_of(rep.final_set);
  j["final_weight"] = json_of(rep.final_weight);
  j["utility"] = json_of(rep.utility);
  j["penalty_total"] = json_of(rep.penalty_total);
  if (rep.opt_weight) j["opt_weight"] = json_of(*rep.opt_weight);
  if (rep.observed_ratio) j["observed_ratio"] = json_of(*rep.observed_ratio);
  return j;
}

inline Json opt_to_json(const OptResult& o) {
  return Json{{"set", json_of(o.set)}, {"weight", json_of(o.weight)}};
}

inline Json axiom_report_to_json(const AxiomReport& a) {
  Json j;
  j["passed"] = a.passed;
  if (!a.passed) {
    j["failed_property"] = a.failed_property;
    j["witness_a"] = json_of(a.witness_a);
    j["witness_b"] = json_of(a.witness_b);
  }
  return j;
}

inline Json audit_to_json(const AuditReport& a) {
  Json j;
  j["passed"] = a.passed();
  if (!a.error.empty()) j["error"] = a.error;
  j["opt"] = opt_to_json(a.opt);
  j["final_set"] = json_of(a.final_set);
  const auto& l = a.graphs;
  j["charge_graphs"] = {{"left_outside_final", l.left_outside_final},
                       {"span", l.span},
                       {"hall", l.hall},
                       {"saturating_matching", l.saturating_matching},
                       {"right_multiplicity", l.right_multiplicity},
                       {"witnesses", l.witnesses},
                       {"intermediate_flags", l.intermediate_flags}};
  const auto& b = a.bounds;
  Json entries = Json::array();
  for (const auto& e : b.entries) {
    entries.push_back(
        {{"id", e.id}, {"kind", e.kind}, {"charge", json_of(e.charge)}, {"bound", json_of(e.bound)}, {"ok", e.ok}});
  }
  j["bounds"] = {{"deleted_ok", b.deleted_ok},
                 {"final_ok", b.final_ok},
                 {"sum_ok", b.sum_ok},
                 {"final_weight_ok", b.final_weight_ok},
                 {"transfer_size_ok", b.transfer_size_ok},
                 {"transfer_count_ok", b.transfer_count_ok},
                 {"conservation_ok", b.conservation_ok},
                 {"causality_ok", b.causality_ok},
                 {"entries", entries}};
  Json residual = Json::array();
  for (const auto& r : a.ledger.conservation_residual) residual.push_back(json_of(r));
  j["conservation_residual"] = residual;
  j["max_abs_residual"] = json_of(b.max_abs_residual);
  return j;
}

inline Json adversary_to_json(const AdversaryReport& rep) {
  auto list = [](const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& q : v) a.push_back(json_of(q));
    return a;
  };
  Json j;
  j["mode"] = "k2";
  j["eps"] = json_of(rep.eps);
  j["f"] = json_of(rep.f);
  j["x"] = list(rep.x);
  j["y"] = list(rep.y);
  j["probes_per_step"] = rep.probes_per_step;
  j["utility_trajectory"] = list(rep.utility_trajectory);
  j["opt_trajectory"] = list(rep.opt_trajectory);
  j["best_ratio_lower_bound"] = rep.best_ratio_lower_bound ? json_of(*rep.best_ratio_lower_bound) : Json(nullptr);
  j["best_ratio_float"] = rep.best_ratio_lower_bound ? float17(to_double(*rep.best_ratio_lower_bound)) : Json(nullptr);
  j["stop_reason"] = rep.stop_reason;
  j["diverged"] = rep.diverged;
  if (rep.divergence_ratio) j["divergence_ratio"] = json_of(*rep.divergence_ratio);
  return j;
}

inline Json star_to_json(const StarReport& rep) {
  Json j;
  j["mode"] = "star";
  j["n"] = rep.n;
  j["eps"] = json_of(rep.eps);
  Json vs = Json::array();
  for (const auto& v : rep.vertices) vs.push_back({{"id", v.id}, {"weight", v.weight.str()}});
  j["vertices"] = vs;
  Json es = Json::array();
  for (const auto& [a, b] : rep.edges) es.push_back({a, b});
  j["edges"] = es;
  j["center_history"] = rep.center_history;
  j["held_neither"] = rep.held_neither;
  j["swaps_to_leaf"] = rep.swaps_to_leaf;
  j["utility"] = json_of(rep.utility);
  j["opt"] = opt_to_json(rep.opt);
  j["formula_bound"] = json_of(rep.formula_bound);
  j["ratio"] = rep.ratio ? json_of(*rep.ratio) : Json(nullptr);
  return j;
}

inline Json zsequence_to_json(const ZSequence& zs, std::size_t max_terms) {
  Json j;
  j["mode"] = "recurrence";
  j["beta"] = float17(zs.beta);
  j["k"] = zs.k;
  j["f"] = float17(zs.f);
  j["discriminant"] = float17(zs.discriminant);
  j["n_terms"] = zs.z.size();
  Json terms = Json::array();
  for (std::size_t i = 0; i < zs.z.size() && i < max_terms; ++i) {
    terms.push_back({{"value", float17(zs.z[i])}, {"log_scale", float17(zs.log_scale[i])}});
  }
  j["z"] = terms;
  j["first_negative_index"] = zs.first_negative_index ? Json(*zs.first_negative_index) : Json(nullptr);
  return j;
}

inline Json generator_config_to_json(const GeneratorConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["kind"] = to_string(c.kind);
  j["n"] = c.n;
  j["k"] = c.k;
  j["f"] = json_of(c.f);
  j["r"] = c.r ? json_of(*c.r) : Json("optimal");
  j["weight_range"] = {json_of(c.weight_lo), json_of(c.weight_hi)};
  j["order"] = to_string(c.order);
  j["distinct_weights"] = c.distinct_weights;
  if (c.kind == InstanceKind::BipartiteMatching) j["right_n"] = c.right_n;
  if (c.kind == InstanceKind::FreeDisposal) {
    j["advertisers"] = c.advertisers;
    j["capacities"] = c.capacities;
  }
  if (c.kind == InstanceKind::Star) j["eps"] = json_of(c.star_eps);
  return j;
}

inline GeneratorConfig generator_config_from_json(const Json& j, const std::string& path) {
  using namespace detail;
  if (!j.is_object()) throw InputError(path + ": expected an object");
  GeneratorConfig c;
  if (j.contains("seed")) c.seed = read_uint(j["seed"], path + ".seed");
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw InputError(path + ".kind: expected a string");
    c.kind = parse_kind(j["kind"].get<std::string>());
  }
  if (j.contains("n")) c.n = static_cast<std::size_t>(read_uint(j["n"], path + ".n"));
  if (j.contains("k")) c.k = static_cast<int>(read_uint(j["k"], path + ".k"));
  if (j.contains("f")) c.f = read_weight(j["f"], path + ".f");
  if (j.contains("r")) {
    const Json& r = j["r"];
    if (!(r.is_string() && r.get<std::string>() == "optimal")) c.r = read_weight(r, path + ".r");
  }
  if (j.contains("weight_range")) {
    const Json& wr = j["weight_range"];
    if (!wr.is_array() || wr.size() != 2) throw InputError(path + ".weight_range: expected [lo, hi]");
    c.weight_lo = read_rational(wr[0], path + ".weight_range[0]");
    c.weight_hi = read_rational(wr[1], path + ".weight_range[1]");
  }
  if (j.contains("order")) {
    if (!j["order"].is_string()) throw InputError(path + ".order: expected a string");
    c.order = parse_order(j["order"].get<std::string>());
  }
  if (j.contains("distinct_weights")) c.distinct_weights = read_bool(j["distinct_weights"], path + ".distinct_weights");
  if (j.contains("right_n")) c.right_n = static_cast<std::size_t>(read_uint(j["right_n"], path + ".right_n"));
  if (j.contains("advertisers")) c.advertisers = static_cast<std::size_t>(read_uint(j["advertisers"], path + ".advertisers"));
  if (j.contains("capacities")) {
    const Json& caps = j["capacities"];
    if (!caps.is_array()) throw InputError(path + ".capacities: expected an array");
    for (std::size_t i = 0; i < caps.size(); ++i) {
      c.capacities.push_back(static_cast<std::size_t>(read_uint(caps[i], path + ".capacities[" + std::to_string(i) + "]")));
    }
  }
  if (j.contains("eps")) c.star_eps = read_rational(j["eps"], path + ".eps");
  return c;
}

/// Batch file: {"configs":[...], "instances_per_config":N, "variants":["alg1",...], "compare_opt":true}
inline BatchConfig batch_config_from_json(const Json& j) {
  using namespace detail;
  BatchConfig b;
  const Json& cs = field(j, "configs", "batch");
  if (!cs.is_array()) throw InputError("configs: expected an array");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    b.configs.push_back(generator_config_from_json(cs[i], "configs[" + std::to_string(i) + "]"));
  }
  if (j.contains("instances_per_config")) {
    b.instances_per_config = static_cast<std::size_t>(read_uint(j["instances_per_config"], "instances_per_config"));
  }
  if (j.contains("variants")) {
    b.variants.clear();
    for (const auto& v : j["variants"]) {
      if (!v.is_string()) throw InputError("variants: expected strings");
      b.variants.push_back(parse_variant(v.get<std::string>()));
    }
  }
  if (j.contains("compare_opt")) b.compare_opt = read_bool(j["compare_opt"], "compare_opt");
  return b;
}

inline Json batch_report_to_json(const BatchReport& rep) {
  Json j;
  Json runs = Json::array();
  for (const auto& s : rep.runs) {
    Json r;
    r["config"] = s.config_index;
    r["instance"] = s.instance_index;
    r["seed"] = s.seed;
    r["kind"] = to_string(s.kind);
    r["variant"] = to_string(s.variant);
    if (!s.error.empty()) {
      r["error"] = s.error;
      runs.push_back(r);
      continue;
    }
    r["k"] = s.k;
    r["n"] = s.n;
    r["f"] = json_of(s.f);
    r["r"] = json_of(s.r);
    r["utility"] = json_of(s.utility);
    r["final_weight"] = json_of(s.final_weight);
    r["penalty_total"] = json_of(s.penalty_total);
    if (s.opt_weight) r["opt_weight"] = json_of(*s.opt_weight);
    if (s.ratio) r["ratio"] = json_of(*s.ratio);
    if (s.theoretical_c) r["theoretical_c"] = json_of(*s.theoretical_c);
    Json inv = Json::object();
    for (const auto& [name, ok] : s.invariants) inv[name] = ok;
    r["invariants"] = inv;
    runs.push_back(r);
  }
  j["runs"] = runs;
  j["worst_ratio"] = rep.worst_ratio ? json_of(*rep.worst_ratio) : Json(nullptr);
  j["theoretical_c"] = rep.theoretical_c ? json_of(*rep.theoretical_c) : Json(nullptr);
  j["worst_within_c"] = rep.worst_within_c;
  Json inv = Json::object();
  for (const auto& [name, t] : rep.invariants) inv[name] = {{"checked", t.checked}, {"failed", t.failed}};
  j["invariants"] = inv;
  j["errors"] = rep.errors;
  j["passed"] = rep.passed();
  return j;
}

}  // namespace buyback

#endif  // BUYBACK_JSON_IO_HPP
