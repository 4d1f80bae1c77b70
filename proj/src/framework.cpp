#include "negot/framework.hpp"

namespace negot {

Framework::Xf Framework::flow_solve(const FlowGraph& g) const {
  // T[v] = join over paths v -> exit; T[exit] = id
  std::vector<std::vector<int>> out(g.nverts);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    out[g.edges[e].from].push_back(e);
  std::vector<Xf> t(g.nverts);
  std::vector<char> has(g.nverts, 0);
  t[g.exit] = identity();
  has[g.exit] = 1;
  for (int round = 0;; ++round) {
    if (round > kIterationCap)
      throw FrameworkError("Diverged", name() + " flow_solve did not stabilize");
    bool changed = false;
    for (int v = 0; v < g.nverts; ++v) {
      if (v == g.exit) continue;
      Xf acc;
      bool any = false;
      for (int e : out[v]) {
        const auto& ed = g.edges[e];
        if (!has[ed.to]) continue;
        Xf part = compose(ed.xf, t[ed.to]);
        acc = any ? join(acc, part) : std::move(part);
        any = true;
      }
      if (!any) continue;
      if (!has[v] || !equal(t[v], acc)) {
        t[v] = std::move(acc);
        has[v] = 1;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (!has[g.entry])
    throw FrameworkError("Unsupported",
                         name() + ": exit unreachable from flow entry");
  return t[g.entry];
}

std::vector<Framework::Val> Framework::value_fixpoint(const ValueGraph& g) const {
  std::vector<Val> v(g.nverts);
  for (auto& x : v) x = bottom();
  v[g.root] = iota();
  for (int round = 0;; ++round) {
    if (round > kIterationCap)
      throw FrameworkError("Diverged",
                           name() + " value_fixpoint did not stabilize");
    bool changed = false;
    for (const auto& e : g.edges) {
      Val cand = join_val(v[e.to], apply(e.xf, v[e.from]));
      if (!val_equal(v[e.to], cand)) {
        v[e.to] = std::move(cand);
        changed = true;
      }
    }
    if (!changed) break;
  }
  return v;
}

std::vector<Framework::Val> Framework::sample_values(const Diagram&,
                                                     std::mt19937&, int) const {
  throw FrameworkError("Unsupported", name() + " has no value sampler");
}

} // namespace negot
