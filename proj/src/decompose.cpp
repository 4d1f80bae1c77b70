#include "negot/decompose.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace negot {

namespace {

void require_deterministic(const Diagram& d) {
  if (!is_deterministic(d).deterministic)
    throw DecomposeError("NotDeterministic", "diagram " + d.name);
}

using DetConfig = std::vector<Nid>; // one node per process

struct DetConfigHash {
  std::size_t operator()(const DetConfig& c) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (Nid n : c) h = (h ^ static_cast<std::size_t>(n)) * 0x100000001b3ull;
    return h;
  }
};

DetConfig to_det(const Config& c) {
  DetConfig r(c.at.size());
  for (std::size_t p = 0; p < c.at.size(); ++p) {
    if (c.at[p].size() != 1)
      throw DecomposeError("NotDeterministic", "set-valued configuration");
    r[p] = c.at[p][0];
  }
  return r;
}

Config to_config(const DetConfig& c) {
  Config r;
  r.at.resize(c.size());
  for (std::size_t p = 0; p < c.size(); ++p) r.at[p] = {c[p]};
  return r;
}

bool det_enabled(const Diagram& d, const DetConfig& c, Nid n) {
  for (Pid p : d.nodes[n].dom)
    if (c[p] != n) return false;
  return true;
}

DetConfig det_step(const Diagram& d, const DetConfig& c, Loc l) {
  DetConfig r = c;
  for (const auto& [p, ts] : d.at(l).moves) r[p] = ts[0];
  return r;
}

bool allowed_dom(const Diagram& d, Nid n, std::uint64_t X, bool strict) {
  auto m = d.dom_mask(n);
  if ((m & X) != m) return false;
  return !strict || m != X;
}

struct Exploration {
  std::unordered_set<DetConfig, DetConfigHash> seen;
  std::set<Loc> fired;
  std::vector<DetConfig> terminals;
};

// BFS over configurations firing only nodes with out != {} whose domain is
// (strictly) inside X.
Exploration explore_restricted(const Diagram& d, const DetConfig& start,
                               std::uint64_t X, bool strict,
                               std::size_t max_configs) {
  Exploration ex;
  std::deque<DetConfig> q{start};
  ex.seen.insert(start);
  std::set<DetConfig> terminal_set;
  while (!q.empty()) {
    DetConfig c = q.front();
    q.pop_front();
    bool any = false;
    for (Nid n = 0; n < d.nnodes(); ++n) {
      if (d.nodes[n].outs.empty() || !allowed_dom(d, n, X, strict)) continue;
      if (!det_enabled(d, c, n)) continue;
      any = true;
      for (int o = 0; o < static_cast<int>(d.nodes[n].outs.size()); ++o) {
        ex.fired.insert({n, o});
        DetConfig next = det_step(d, c, {n, o});
        if (ex.seen.insert(next).second) {
          if (ex.seen.size() > max_configs)
            throw DecomposeError("StepLimit", "restricted exploration cap");
          q.push_back(std::move(next));
        }
      }
    }
    if (!any && terminal_set.insert(c).second) ex.terminals.push_back(c);
  }
  return ex;
}

} // namespace

PartialConfig restrict_config(const Config& c, std::uint64_t scope) {
  PartialConfig r;
  r.scope = scope;
  r.at.assign(c.at.size(), -1);
  for (std::size_t p = 0; p < c.at.size(); ++p)
    if (scope & (1ull << p)) {
      if (c.at[p].size() != 1)
        throw DecomposeError("NotDeterministic", "set-valued configuration");
      r.at[p] = c.at[p][0];
    }
  return r;
}

Config initial_config_of_node(const Diagram& d, Nid m, std::size_t max_configs) {
  require_deterministic(d);
  auto g = reachability_graph(d, max_configs);
  if (g.truncated)
    throw DecomposeError("LimitExceeded", "reachability graph truncated");
  const Config* found = nullptr;
  for (const auto& c : g.verts) {
    auto e = enabled(d, c);
    if (e.active.size() == 1 && e.active[0] == m) {
      if (found && !(*found == c))
        throw DecomposeError("NotUnique", "two initial configurations for " +
                                              d.nodes[m].name);
      found = &c;
    }
  }
  if (!found)
    throw DecomposeError("NotFound",
                         "no configuration enables only " + d.nodes[m].name);
  return *found;
}

Config final_config_of_node(const Diagram& d, Nid m, std::size_t max_configs) {
  DetConfig start = to_det(initial_config_of_node(d, m, max_configs));
  auto ex = explore_restricted(d, start, d.dom_mask(m), false, max_configs);
  if (ex.terminals.size() != 1)
    throw DecomposeError("NonConfluent",
                         std::to_string(ex.terminals.size()) +
                             " terminal configurations for " + d.nodes[m].name);
  return to_config(ex.terminals[0]);
}

Config final_config_of_location(const Diagram& d, Loc l, std::size_t max_configs) {
  DetConfig start = to_det(initial_config_of_node(d, l.node, max_configs));
  DetConfig after = det_step(d, start, l);
  auto ex = explore_restricted(d, after, d.dom_mask(l.node), true, max_configs);
  if (ex.terminals.size() != 1)
    throw DecomposeError("NonConfluent",
                         std::to_string(ex.terminals.size()) +
                             " terminal configurations for " + d.loc_name(l));
  return to_config(ex.terminals[0]);
}

namespace {

Subnegotiation build_sub(const Diagram& d, Nid pivot,
                         const std::set<Nid>& inner_nodes,
                         const std::set<Loc>& pivot_locs, const DetConfig& F,
                         const std::string& fin_name) {
  std::uint64_t X = d.dom_mask(pivot);
  Subnegotiation s;
  s.pivot = pivot;
  for (Pid p = 0; p < d.nprocs(); ++p)
    if (X & (1ull << p)) s.orig_proc.push_back(p);
  std::vector<std::string> proc_names;
  for (Pid p : s.orig_proc) proc_names.push_back(d.procs[p]);
  DiagramBuilder b(d.name + "|" + d.nodes[pivot].name, proc_names);

  std::vector<Nid> order(inner_nodes.begin(), inner_nodes.end());
  std::map<Nid, int> sub_of;
  auto dom_names = [&](Nid n) {
    std::vector<std::string> r;
    for (Pid p : d.nodes[n].dom) r.push_back(d.procs[p]);
    return r;
  };
  for (Nid n : order)
    sub_of[n] = b.node(d.nodes[n].name, dom_names(n), n == pivot, false);
  std::vector<std::string> all = proc_names;
  Nid sub_fin = b.node(fin_name, all, false, true);
  (void)sub_fin;

  for (Nid n : order) {
    for (int o = 0; o < static_cast<int>(d.nodes[n].outs.size()); ++o) {
      if (n == pivot && !pivot_locs.count({n, o})) continue;
      const Outcome& out = d.nodes[n].outs[o];
      std::vector<std::pair<std::string, std::vector<std::string>>> moves;
      for (const auto& [p, ts] : out.moves) {
        Nid t = ts[0];
        std::string target;
        if (t == F[p])
          target = fin_name;
        else if (inner_nodes.count(t))
          target = d.nodes[t].name;
        else
          throw DecomposeError("NotFound", "successor " + d.nodes[t].name +
                                               " escapes the subnegotiation");
        moves.push_back({d.procs[p], {target}});
      }
      std::map<std::string, Rat> time;
      for (const auto& [p, t] : out.time) time[d.procs[p]] = t;
      b.outcome(d.nodes[n].name, out.name, moves, out.prob, out.cost, time);
    }
  }
  s.d = b.take();
  s.orig_node.assign(s.d.nnodes(), -1);
  for (auto& [orig, sub] : sub_of) s.orig_node[sub] = orig;
  return s;
}

std::string fresh_fin_name(const Diagram& d, std::string base) {
  while (d.node_by_name(base) >= 0) base += "_";
  return base;
}

} // namespace

Subnegotiation subnegotiation_of_node(const Diagram& d, Nid n,
                                      std::size_t max_configs) {
  DetConfig I = to_det(initial_config_of_node(d, n, max_configs));
  auto ex = explore_restricted(d, I, d.dom_mask(n), false, max_configs);
  if (ex.terminals.size() != 1)
    throw DecomposeError("NonConfluent", "for " + d.nodes[n].name);
  const DetConfig& F = ex.terminals[0];
  std::set<Nid> inner{n};
  std::set<Loc> pivot_locs;
  for (const Loc& l : ex.fired) {
    inner.insert(l.node);
    if (l.node == n) pivot_locs.insert(l);
  }
  // the pivot keeps all its outcomes
  for (int o = 0; o < static_cast<int>(d.nodes[n].outs.size()); ++o)
    pivot_locs.insert({n, o});
  return build_sub(d, n, inner, pivot_locs, F,
                   fresh_fin_name(d, d.nodes[n].name + "_fin"));
}

Subnegotiation subnegotiation_of_location(const Diagram& d, Loc l,
                                          std::size_t max_configs) {
  DetConfig I = to_det(initial_config_of_node(d, l.node, max_configs));
  DetConfig after = det_step(d, I, l);
  auto ex = explore_restricted(d, after, d.dom_mask(l.node), true, max_configs);
  if (ex.terminals.size() != 1)
    throw DecomposeError("NonConfluent", "for " + d.loc_name(l));
  const DetConfig& F = ex.terminals[0];
  std::set<Nid> inner{l.node};
  for (const Loc& m : ex.fired) inner.insert(m.node);
  return build_sub(d, l.node, inner, {l}, F,
                   fresh_fin_name(d, d.loc_name(l) + "_fin"));
}

SaturateResult saturate(const Diagram& d, PartialConfig start, std::uint64_t X,
                        bool strict) {
  SaturateResult r;
  r.end = std::move(start);
  std::vector<char> fired_node(d.nnodes(), 0);
  for (;;) {
    Nid pick = -1;
    for (Nid n = 0; n < d.nnodes(); ++n) {
      if (d.nodes[n].outs.empty() || !allowed_dom(d, n, X, strict)) continue;
      bool en = true;
      for (Pid p : d.nodes[n].dom)
        if (r.end.at[p] != n) { en = false; break; }
      if (!en) continue;
      pick = n;
      break;
    }
    if (pick < 0) break;
    if (fired_node[pick])
      throw DecomposeError("RepeatFiring", d.nodes[pick].name + " fired twice");
    if (d.nodes[pick].outs.size() != 1)
      throw DecomposeError("RepeatFiring",
                           d.nodes[pick].name + " is not single-outcome");
    fired_node[pick] = 1;
    Loc l{pick, 0};
    for (const auto& [p, ts] : d.at(l).moves) r.end.at[p] = ts[0];
    r.fired.push_back(l);
  }
  return r;
}

SubnegKind classify(const Subnegotiation& s) {
  const Diagram& d = s.d;
  bool one_trace = true;
  for (Nid n = 0; n < d.nnodes(); ++n)
    if (n != d.fin && d.nodes[n].outs.size() != 1) one_trace = false;
  if (one_trace && local_graph(d).acyclic) return SubnegKind::OneTrace;

  bool replication = true;
  std::uint64_t dm = d.dom_mask(d.init);
  for (Nid n = 0; n < d.nnodes() && replication; ++n) {
    if (d.dom_mask(n) != dm) replication = false;
    for (const auto& out : d.nodes[n].outs) {
      Nid target = -2;
      for (const auto& [p, ts] : out.moves) {
        if (ts.size() != 1) { replication = false; break; }
        if (target == -2) target = ts[0];
        else if (target != ts[0]) { replication = false; break; }
      }
    }
  }
  if (replication) return SubnegKind::Replication;
  return SubnegKind::General;
}

} // namespace negot
