#include "negot/engine.hpp"

#include <algorithm>
#include <bit>
#include <deque>

namespace negot {

namespace {

bool proper_subset(std::uint64_t a, std::uint64_t b) {
  return a != b && (a & b) == a;
}

PartialConfig successor_config(const Diagram& d, Loc l) {
  const NodeDef& nd = d.nodes[l.node];
  PartialConfig c;
  c.scope = nd.dom_mask;
  c.at.assign(d.nprocs(), -1);
  for (const auto& [p, ts] : d.at(l).moves) c.at[p] = ts[0];
  return c;
}

} // namespace

std::any xf_of(const Diagram& d, const ReducedState& st, const Framework& fw,
               Loc l) {
  auto it = st.registry.find(d.at(l).name);
  if (it != st.registry.end()) return it->second;
  return fw.base(d, l);
}

void refresh_pruned(const Diagram& d, ReducedState& st) {
  std::vector<char> seen(d.nnodes(), 0);
  std::deque<Nid> work{d.init};
  seen[d.init] = 1;
  while (!work.empty()) {
    Nid n = work.front();
    work.pop_front();
    for (const auto& o : d.nodes[n].outs)
      for (const auto& [p, ts] : o.moves)
        for (Nid t : ts)
          if (!seen[t]) {
            seen[t] = 1;
            work.push_back(t);
          }
  }
  st.pruned.assign(d.nnodes(), 0);
  for (Nid n = 0; n < d.nnodes(); ++n) st.pruned[n] = !seen[n];
}

int reachable_locations(const Diagram& d) {
  ReducedState st;
  refresh_pruned(d, st);
  int c = 0;
  for (Nid n = 0; n < d.nnodes(); ++n)
    if (!st.pruned[n]) c += static_cast<int>(d.nodes[n].outs.size());
  return c;
}

bool is_reduced_node(const Diagram& d, const ReducedState& st, Nid n) {
  for (Nid m = 0; m < d.nnodes(); ++m)
    if (!st.pruned[m] && !st.node_reduced[m] &&
        proper_subset(d.dom_mask(m), d.dom_mask(n)))
      throw EngineError("PreconditionViolated",
                        d.nodes[m].name + " is unreduced below " +
                            d.nodes[n].name);
  const NodeDef& nd = d.nodes[n];
  if (nd.outs.empty()) return true;
  if (nd.outs.size() != 1) return false;
  PartialConfig c = successor_config(d, {n, 0});
  for (Nid m = 0; m < d.nnodes(); ++m) {
    if (d.nodes[m].outs.empty()) continue;
    if ((d.dom_mask(m) & nd.dom_mask) != d.dom_mask(m)) continue;
    bool en = true;
    for (Pid p : d.nodes[m].dom)
      if (c.at[p] != m) { en = false; break; }
    if (en) return false;
  }
  return true;
}

std::any one_trace_mop(const Diagram& d, const ReducedState& st,
                       const Framework& fw, Loc l) {
  std::uint64_t X = d.dom_mask(l.node);
  SaturateResult sat = saturate(d, successor_config(d, l), X, /*strict=*/true);
  std::any xf = xf_of(d, st, fw, l);
  for (Loc f : sat.fired) xf = fw.compose(xf, xf_of(d, st, fw, f));
  return xf;
}

void red_location(Diagram& d, ReducedState& st, const Framework& fw, Loc l) {
  Outcome& o = d.nodes[l.node].outs[l.out];
  if (st.node_reduced[l.node] || st.registry.count(o.name))
    throw EngineError("AlreadyReduced", d.loc_name(l));
  std::uint64_t X = d.dom_mask(l.node);
  SaturateResult sat = saturate(d, successor_config(d, l), X, /*strict=*/true);
  std::any xf = xf_of(d, st, fw, l);
  for (Loc f : sat.fired) xf = fw.compose(xf, xf_of(d, st, fw, f));
  std::string fresh = "a{" + d.loc_name(l) + "}";
  o.name = fresh;
  o.cost.reset();
  o.time.clear();
  for (Pid p : d.nodes[l.node].dom) o.moves[p] = {sat.end.at[p]};
  st.registry[fresh] = std::move(xf);
  refresh_pruned(d, st);
}

ReplicationResult replication_mop(const Diagram& d, const ReducedState& st,
                                  const Framework& fw, Nid n) {
  std::uint64_t X = d.dom_mask(n);
  std::vector<Nid> verts{n};
  std::vector<int> index(d.nnodes(), -1);
  index[n] = 0;

  ReplicationResult r;
  r.exit.scope = X;
  r.exit.at.assign(d.nprocs(), -1);
  bool have_exit = false;

  FlowGraph g;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    Nid v = verts[i];
    for (int o = 0; o < static_cast<int>(d.nodes[v].outs.size()); ++o) {
      Loc l{v, o};
      Nid target = -1;
      bool uniform = true;
      for (const auto& [p, ts] : d.at(l).moves) {
        if (ts.size() != 1)
          throw EngineError("EngineInvariantBroken",
                            "nondeterministic move at " + d.loc_name(l));
        if (target == -1) target = ts[0];
        uniform &= ts[0] == target;
      }
      if (uniform && d.dom_mask(target) == X &&
          !d.nodes[target].outs.empty()) {
        if (index[target] < 0) {
          index[target] = static_cast<int>(verts.size());
          verts.push_back(target);
        }
        g.edges.push_back({(int)i, index[target], xf_of(d, st, fw, l)});
        continue;
      }
      PartialConfig e = successor_config(d, l);
      if (!have_exit) {
        r.exit = e;
        have_exit = true;
      } else if (!(r.exit == e)) {
        throw EngineError("ExitMismatch", "diverging exits from " +
                                              d.nodes[n].name + " at " +
                                              d.loc_name(l));
      }
      g.edges.push_back({(int)i, -1, xf_of(d, st, fw, l)});
    }
  }
  if (!have_exit)
    throw EngineError("EngineInvariantBroken",
                      "no exit from the class of " + d.nodes[n].name);
  g.nverts = static_cast<int>(verts.size()) + 1;
  g.entry = 0;
  g.exit = g.nverts - 1;
  for (auto& e : g.edges)
    if (e.to < 0) e.to = g.exit;
  r.xf = fw.flow_solve(g);
  r.members = std::move(verts);
  return r;
}

void red_node(Diagram& d, ReducedState& st, const Framework& fw, Nid n,
              const ReplicationResult* pre) {
  if (st.node_reduced[n]) throw EngineError("AlreadyReduced", d.nodes[n].name);
  ReplicationResult local;
  if (!pre) {
    local = replication_mop(d, st, fw, n);
    pre = &local;
  }
  std::string fresh = "a{" + d.nodes[n].name + "}";
  Outcome o;
  o.name = fresh;
  o.prob = Rat(1);
  for (Pid p : d.nodes[n].dom) o.moves[p] = {pre->exit.at[p]};
  d.nodes[n].outs.assign(1, std::move(o));
  st.registry[fresh] = pre->xf;
  st.node_reduced[n] = 1;
  refresh_pruned(d, st);
}

namespace {

// Marks nodes that already satisfy the syntactic reduced test, smallest
// domains first; skips nodes whose smaller-domain context is not settled yet.
void syntactic_pass(const Diagram& d, ReducedState& st) {
  std::vector<Nid> order;
  for (Nid n = 0; n < d.nnodes(); ++n)
    if (!st.pruned[n] && !st.node_reduced[n]) order.push_back(n);
  std::stable_sort(order.begin(), order.end(), [&](Nid a, Nid b) {
    return std::popcount(d.dom_mask(a)) < std::popcount(d.dom_mask(b));
  });
  for (Nid n : order) {
    bool ready = true;
    for (Nid m = 0; m < d.nnodes() && ready; ++m)
      if (!st.pruned[m] && !st.node_reduced[m] &&
          proper_subset(d.dom_mask(m), d.dom_mask(n)))
        ready = false;
    if (ready && is_reduced_node(d, st, n)) st.node_reduced[n] = 1;
  }
}

} // namespace

MopResult compute_mop(const Diagram& d, const Framework& fw, bool record_trace,
                      bool stage_reverse) {
  auto det = is_deterministic(d);
  if (!det.deterministic)
    throw EngineError("NotDeterministic", "nondeterministic input");

  MopResult res;
  Diagram w = d;
  ReducedState st;
  st.node_reduced.assign(w.nnodes(), 0);
  for (Nid n = 0; n < w.nnodes(); ++n)
    if (w.nodes[n].outs.empty()) st.node_reduced[n] = 1;
  refresh_pruned(w, st);
  syntactic_pass(w, st);

  auto snapshot = [&]() {
    if (!record_trace) return -1;
    res.trace.snapshots.push_back(w);
    res.trace.registries.push_back(st.registry);
    res.trace.reachable_locs.push_back(reachable_locations(w));
    return static_cast<int>(res.trace.snapshots.size()) - 1;
  };
  snapshot();

  try {
    int guard = 0;
    int bound = static_cast<int>(d.locations().size()) + d.nnodes() + 1;
    while (!st.node_reduced[w.init]) {
      if (++guard > bound)
        throw EngineError("EngineInvariantBroken", "reduction loop stalled");

      // minimal-domain unreduced node, lowest id
      Nid m = -1;
      for (Nid n = 0; n < w.nnodes(); ++n) {
        if (st.pruned[n] || st.node_reduced[n]) continue;
        bool minimal = true;
        for (Nid k = 0; k < w.nnodes() && minimal; ++k)
          if (!st.pruned[k] && !st.node_reduced[k] &&
              proper_subset(w.dom_mask(k), w.dom_mask(n)))
            minimal = false;
        if (minimal) { m = n; break; }
      }
      if (m < 0)
        throw EngineError("EngineInvariantBroken", "no reducible node");
      std::uint64_t X = w.dom_mask(m);

      std::vector<Nid> stage;
      for (Nid n = 0; n < w.nnodes(); ++n)
        if (!st.pruned[n] && !st.node_reduced[n] && w.dom_mask(n) == X)
          stage.push_back(n);
      if (stage_reverse) std::reverse(stage.begin(), stage.end());

      for (Nid n : stage) {
        int nouts = static_cast<int>(w.nodes[n].outs.size());
        for (int i = 0; i < nouts; ++i) {
          int o = stage_reverse ? nouts - 1 - i : i;
          ReductionStep step;
          step.kind = ReductionStep::Kind::Location;
          step.pivot = w.loc_name({n, o});
          red_location(w, st, fw, {n, o});
          if (record_trace) {
            step.members.push_back(w.nodes[n].name);
            step.klass = SubnegKind::OneTrace;
            step.xf = st.registry.at(w.at({n, o}).name);
            step.snapshot = snapshot();
            res.trace.steps.push_back(std::move(step));
          }
        }
      }

      // compute all class solutions before rewiring any node (phase order)
      std::vector<std::pair<Nid, ReplicationResult>> reps;
      for (Nid n : stage) reps.emplace_back(n, replication_mop(w, st, fw, n));
      for (auto& [n, rep] : reps) {
        ReductionStep step;
        step.kind = ReductionStep::Kind::Node;
        step.pivot = w.nodes[n].name;
        for (Nid v : rep.members) step.members.push_back(w.nodes[v].name);
        step.klass = SubnegKind::Replication;
        step.xf = rep.xf;
        red_node(w, st, fw, n, &rep);
        if (record_trace) {
          step.snapshot = snapshot();
          res.trace.steps.push_back(std::move(step));
        }
      }
    }
  } catch (const DecomposeError& e) {
    throw EngineError("NotSoundEvidence", e.what());
  } catch (const EngineError& e) {
    if (e.code == "ExitMismatch" || e.code == "EngineInvariantBroken")
      throw EngineError("NotSoundEvidence", e.what());
    throw;
  }

  if (w.nodes[w.init].outs.size() != 1)
    throw EngineError("EngineInvariantBroken",
                      "initial node not single-outcome after reduction");
  res.xf = xf_of(w, st, fw, {w.init, 0});
  res.value = fw.apply(res.xf, fw.iota());
  return res;
}

} // namespace negot
