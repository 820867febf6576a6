// One-pass weighted bipartite matching with buyback: streams the edges of a
// random complete bipartite graph and compares the kept matching with the
// offline optimum.

#include <cstdlib>
#include <iostream>

#include "buyback/buyback.hpp"

int main(int argc, char** argv) {
  using namespace buyback;
  GeneratorConfig cfg;
  cfg.kind = InstanceKind::BipartiteMatching;
  cfg.k = 2;
  cfg.n = 4;
  cfg.seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
  cfg.order = ArrivalOrder::Random;

  const Instance inst = gen(cfg);
  const RunReport rep = run_stream(inst, Variant::Algorithm1);
  const OptResult opt = brute_opt(inst);

  std::size_t held = 0, peak = 0;
  for (const auto& st : rep.trace) {
    if (st.decision.accepted()) ++held;
    held -= st.decision.evicted.size();
    if (held > peak) peak = held;
    std::cout << "edge " << st.element.id << " (" << st.element.weight.to_double() << "): " << to_string(st.decision.kind)
              << "\n";
  }
  std::cout << "kept " << rep.final_set.size() << " edges, weight " << to_double(rep.final_weight) << "\n"
            << "peak matching size " << peak << "\n"
            << "utility " << to_double(rep.utility) << ", offline optimum " << to_double(opt.weight) << "\n"
            << "guarantee: optimum / utility <= " << optimal_competitive_ratio(2, 0) << "\n";
  return 0;
}
