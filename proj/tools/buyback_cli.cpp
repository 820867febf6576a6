// Command-line front end: run, opt, audit, adversary, gen, ratio, axioms, batch.
//
// Exit codes: 0 success, 1 invariant violation, 2 input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "buyback/buyback.hpp"

namespace {

using namespace buyback;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

Json read_input(const std::string& path) {
  if (path.empty() || path == "-") return read_json_stream(std::cin, "stdin");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_json_stream(in, path);
}

void emit(const Json& j) { std::cout << dump_json(j) << "\n"; }

Rational parse_arg(const std::string& text, const char* what) {
  try {
    return parse_rational(text);
  } catch (const Error& ex) {
    throw InputError(std::string(what) + ": " + ex.what());
  }
}

int cmd_run(const std::string& path, const std::string& variant_name, bool with_opt, bool brief) {
  const Instance inst = instance_from_json(read_input(path));
  RunReport rep = run_stream(inst, parse_variant(variant_name));
  if (with_opt) attach_opt(rep, brute_opt(inst).weight);
  emit(run_report_to_json(rep, !brief));
  return kExitOk;
}

int cmd_opt(const std::string& path, bool greedy) {
  const Instance inst = instance_from_json(read_input(path));
  emit(opt_to_json(greedy ? greedy_offline(inst) : brute_opt(inst)));
  return kExitOk;
}

int cmd_audit(const std::string& path) {
  const Instance inst = instance_from_json(read_input(path));
  const AuditReport rep = audit_instance(inst);
  emit(audit_to_json(rep));
  return rep.passed() ? kExitOk : kExitViolation;
}

struct AdversaryArgs {
  std::string mode = "k2";
  std::string eps = "1/10000";
  std::size_t steps = 30;
  double beta = 0;
  int k = 2;
  std::string f = "0";
  std::size_t n = 10;
  std::string cap = "1000000";
  std::size_t terms = 10000;
  std::size_t print_terms = 50;
  std::string search = "gallop";
  std::string against = "alg1";
};

int cmd_adversary(const AdversaryArgs& a) {
  const Rational f = parse_arg(a.f, "--f");
  if (a.mode == "k2") {
    K2AdversaryOptions opt;
    opt.f = f;
    opt.eps = parse_arg(a.eps, "--eps");
    opt.max_steps = a.steps;
    opt.weight_cap = parse_arg(a.cap, "--cap");
    if (a.search == "linear") {
      opt.search = ProbeSearch::Linear;
    } else if (a.search != "gallop") {
      throw InputError("--search must be linear or gallop");
    }
    AdversaryReport rep;
    if (a.against == "never-cancel") {
      NeverCancelMatching alg;
      rep = k2_adversary(alg, opt);
    } else {
      auto alg = EngineMatchingAdapter::with_optimal_threshold(f, parse_variant(a.against));
      rep = k2_adversary(alg, opt);
    }
    Json j = adversary_to_json(rep);
    j["feasible"] = verify_adversary_feasibility(rep);
    emit(j);
    return j["feasible"].get<bool>() ? kExitOk : kExitViolation;
  }
  if (a.mode == "star") {
    BaselineFamilyAdapter alg(f);
    emit(star_to_json(star_adversary(alg, a.n, parse_arg(a.eps, "--eps"))));
    return kExitOk;
  }
  if (a.mode == "recurrence") {
    const double fd = to_double(f);
    const double beta = a.beta > 0 ? a.beta : optimal_competitive_ratio(a.k, fd);
    const ZSequence zs = z_sequence(beta, a.k, fd, a.terms);
    Json j = zsequence_to_json(zs, a.print_terms);
    const PositivityResult pr = positivity_check(zs);
    j["positivity"] = {{"consistent", pr.consistent}, {"terms_examined", pr.terms_examined}};
    emit(j);
    return kExitOk;
  }
  throw InputError("--mode must be k2, star or recurrence");
}

int cmd_ratio(int k, const std::string& f_text, const std::optional<std::string>& r_text) {
  if (k < 1) throw InputError("k must be >= 1");
  const Rational f = parse_arg(f_text, "f");
  if (sgn(f) < 0) throw InputError("f must be nonnegative");
  const double fd = to_double(f);
  Json j;
  j["k"] = k;
  j["f"] = json_of(f);
  j["optimal_r"] = float17(optimal_r(k, fd));
  j["c"] = float17(optimal_competitive_ratio(k, fd));
  if (r_text) {
    const Rational r = parse_arg(*r_text, "r");
    j["r"] = json_of(r);
    j["c_at_r"] = float17(to_double(competitive_ratio_exact(k, f, r)));
  }
  emit(j);
  return kExitOk;
}

int cmd_axioms(const std::string& path) {
  const Instance inst = instance_from_json(read_input(path));
  const IdSet ground = make_id_set(ids_of(inst.elements));
  Json out = Json::array();
  bool ok = true;
  for (std::size_t j = 0; j < inst.matroids.size(); ++j) {
    const AxiomReport rep = axiom_check(inst.matroids[j], ground);
    Json entry = axiom_report_to_json(rep);
    entry["index"] = j;
    entry["type"] = kind_name(inst.matroids[j]);
    // set families need not satisfy exchange; only true matroids decide the exit code
    if (is_true_matroid(inst.matroids[j]) && !rep.passed) ok = false;
    out.push_back(entry);
  }
  emit(Json{{"passed", ok}, {"matroids", out}});
  return ok ? kExitOk : kExitViolation;
}

int cmd_batch(const std::string& path) {
  BatchConfig cfg = batch_config_from_json(read_input(path));
  for (auto& c : cfg.configs) c.seed = seed_override(c.seed);
  const BatchReport rep = run_batch(cfg);
  emit(batch_report_to_json(rep));
  return rep.passed() ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online buyback for weighted k-matroid intersection"};
  app.require_subcommand(1);

  std::string path;
  std::string variant = "alg1";
  bool with_opt = false, brief = false, greedy = false;

  auto* run = app.add_subcommand("run", "run an online variant on an instance");
  run->add_option("instance", path, "instance JSON (default: stdin)");
  run->add_option("--variant", variant, "alg1 | alg2 | single_element");
  run->add_flag("--opt", with_opt, "attach brute-force OPT and the observed ratio");
  run->add_flag("--brief", brief, "omit the per-step trace");

  auto* opt = app.add_subcommand("opt", "offline optimum");
  opt->add_option("instance", path, "instance JSON (default: stdin)");
  opt->add_flag("--greedy", greedy, "greedy baseline instead of the exact optimum");

  auto* audit = app.add_subcommand("audit", "run Algorithm 1 with the charging audit");
  audit->add_option("instance", path, "instance JSON (default: stdin)");

  AdversaryArgs adv;
  auto* adversary = app.add_subcommand("adversary", "lower-bound drivers");
  adversary->add_option("--mode", adv.mode, "k2 | star | recurrence");
  adversary->add_option("--eps", adv.eps, "probe grid / star epsilon");
  adversary->add_option("--steps", adv.steps, "k2: maximum committed steps");
  adversary->add_option("--cap", adv.cap, "k2: weight cap");
  adversary->add_option("--search", adv.search, "k2: gallop | linear");
  adversary->add_option("--against", adv.against, "k2: alg1 | alg2 | never-cancel");
  adversary->add_option("--beta", adv.beta, "recurrence: beta (default: optimal ratio)");
  adversary->add_option("--k", adv.k, "recurrence: k");
  adversary->add_option("--f", adv.f, "penalty factor");
  adversary->add_option("--n", adv.n, "star: number of vertices");
  adversary->add_option("--terms", adv.terms, "recurrence: number of terms");
  adversary->add_option("--print-terms", adv.print_terms, "recurrence: terms to print");

  GeneratorConfig gcfg;
  std::string kind = to_string(gcfg.kind), order = to_string(gcfg.order), f_text = "0", r_text = "optimal";
  std::string lo = "1", hi = "10", eps = "1/1000";
  auto* gen_cmd = app.add_subcommand("gen", "generate an instance");
  gen_cmd->add_option("--kind", kind,
                      "bipartite-matching | random-partition-intersection | graphic-intersection | uniform | mixed | "
                      "free-disposal | star");
  gen_cmd->add_option("--n", gcfg.n, "size");
  gen_cmd->add_option("--right-n", gcfg.right_n, "bipartite right side");
  gen_cmd->add_option("--k", gcfg.k, "number of constraints");
  gen_cmd->add_option("--f", f_text, "penalty factor");
  gen_cmd->add_option("--r", r_text, "threshold or 'optimal'");
  gen_cmd->add_option("--seed", gcfg.seed, "seed (BUYBACK_SEED overrides)");
  gen_cmd->add_option("--lo", lo, "weight lower bound");
  gen_cmd->add_option("--hi", hi, "weight upper bound");
  gen_cmd->add_option("--order", order, "as-generated | random | ascending | descending");
  gen_cmd->add_option("--advertisers", gcfg.advertisers, "free-disposal advertisers");
  gen_cmd->add_option("--capacities", gcfg.capacities, "free-disposal capacities");
  gen_cmd->add_option("--eps", eps, "star epsilon");

  int rk = 2;
  std::string rf = "0";
  std::optional<std::string> rr;
  auto* ratio = app.add_subcommand("ratio", "optimal threshold and competitive ratio");
  ratio->add_option("k", rk)->required();
  ratio->add_option("f", rf)->required();
  ratio->add_option("r", rr);

  auto* axioms = app.add_subcommand("axioms", "exhaustive axiom check of each constraint");
  axioms->add_option("instance", path, "instance JSON (default: stdin)");

  auto* batch = app.add_subcommand("batch", "batch experiment from a config file");
  batch->add_option("config", path, "batch config JSON (default: stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*run) return cmd_run(path, variant, with_opt, brief);
    if (*opt) return cmd_opt(path, greedy);
    if (*audit) return cmd_audit(path);
    if (*adversary) return cmd_adversary(adv);
    if (*ratio) return cmd_ratio(rk, rf, rr);
    if (*axioms) return cmd_axioms(path);
    if (*batch) return cmd_batch(path);
    if (*gen_cmd) {
      gcfg.kind = parse_kind(kind);
      gcfg.order = parse_order(order);
      gcfg.f = Weight(parse_arg(f_text, "--f"));
      if (r_text != "optimal") gcfg.r = Weight(parse_arg(r_text, "--r"));
      gcfg.weight_lo = parse_arg(lo, "--lo");
      gcfg.weight_hi = parse_arg(hi, "--hi");
      gcfg.star_eps = parse_arg(eps, "--eps");
      gcfg.seed = seed_override(gcfg.seed);
      emit(instance_to_json(gen(gcfg)));
      return kExitOk;
    }
  } catch (const InvariantViolation& ex) {
    std::cerr << "invariant violation: " << ex.what() << "\n";
    return kExitViolation;
  } catch (const ProtocolError& ex) {
    std::cerr << "protocol error: " << ex.what() << "\n";
    return kExitViolation;
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitInput;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
