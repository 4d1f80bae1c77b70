#include "negot/soundness.hpp"

#include <algorithm>
#include <deque>

namespace negot {

ReachabilityGraph reachability_graph(const Diagram& d, std::size_t max_configs) {
  ReachabilityGraph g;
  g.limit = max_configs;
  Config c0 = initial_config(d), cf = final_config(d);
  g.verts.push_back(c0);
  g.index.emplace(c0, 0);
  g.out_edges.emplace_back();
  if (c0 == cf) g.fin = 0;
  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop_front();
    Config cur = g.verts[v]; // copy: verts may reallocate
    auto en = enabled(d, cur);
    for (Nid n : en.active) {
      for (int o = 0; o < static_cast<int>(d.nodes[n].outs.size()); ++o) {
        Loc l{n, o};
        auto next = step(d, cur, l);
        auto [it, fresh] = g.index.emplace(*next, static_cast<int>(g.verts.size()));
        if (fresh) {
          if (g.verts.size() >= max_configs) {
            g.index.erase(it);
            g.truncated = true;
            return g;
          }
          g.verts.push_back(std::move(*next));
          g.out_edges.emplace_back();
          if (g.verts.back() == cf) g.fin = it->second;
          frontier.push_back(it->second);
        }
        g.out_edges[v].push_back(static_cast<int>(g.edges.size()));
        g.edges.push_back({v, l, it->second});
      }
    }
  }
  return g;
}

SoundnessVerdict check_soundness(const Diagram& d, std::size_t max_configs) {
  auto g = reachability_graph(d, max_configs);
  SoundnessVerdict r;
  if (g.truncated) {
    r.status = SoundStatus::LimitExceeded;
    return r;
  }
  // backward closure from the final configuration
  std::vector<char> cofin(g.verts.size(), 0);
  if (g.fin >= 0) {
    std::vector<std::vector<int>> preds(g.verts.size());
    for (const auto& e : g.edges) preds[e.to].push_back(e.from);
    std::vector<int> stack{g.fin};
    cofin[g.fin] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int p : preds[v])
        if (!cofin[p]) {
          cofin[p] = 1;
          stack.push_back(p);
        }
    }
  }
  bool all = true;
  for (std::size_t v = 0; v < g.verts.size(); ++v)
    if (!cofin[v]) all = false;
  if (all) return r;
  r.status = SoundStatus::Unsound;
  // shortest path from root to any non-cofinal vertex
  std::vector<int> via_edge(g.verts.size(), -1), dist(g.verts.size(), -1);
  std::deque<int> q{g.root};
  dist[g.root] = 0;
  int target = cofin[g.root] ? -1 : g.root;
  while (!q.empty() && target < 0) {
    int v = q.front();
    q.pop_front();
    for (int ei : g.out_edges[v]) {
      int t = g.edges[ei].to;
      if (dist[t] < 0) {
        dist[t] = dist[v] + 1;
        via_edge[t] = ei;
        if (!cofin[t]) {
          target = t;
          break;
        }
        q.push_back(t);
      }
    }
  }
  for (int v = target; v >= 0 && via_edge[v] >= 0;) {
    r.witness.push_back(g.edges[via_edge[v]].loc);
    v = g.edges[via_edge[v]].from;
  }
  std::reverse(r.witness.begin(), r.witness.end());
  return r;
}

DeadlockReport deadlocks(const Diagram& d, std::size_t max_configs) {
  auto g = reachability_graph(d, max_configs);
  DeadlockReport r;
  r.truncated = g.truncated;
  Config cf = final_config(d);
  for (const auto& c : g.verts) {
    if (c == cf) continue;
    auto e = enabled(d, c);
    if (e.active.empty()) r.configs.push_back(c);
  }
  return r;
}

namespace {

// Enumerates simple circuits with smallest node first, bounded length.
struct CircuitSearch {
  const Diagram& d;
  const LocalGraph& g;
  int max_len;
  std::vector<char> on_path;
  std::vector<Nid> path;
  Nid start = -1;
  std::vector<Nid> bad;

  bool dominated() const {
    for (Nid m : path) {
      bool dom_all = true;
      for (Nid n : path)
        if ((d.dom_mask(n) & d.dom_mask(m)) != d.dom_mask(n)) {
          dom_all = false;
          break;
        }
      if (dom_all) return true;
    }
    return false;
  }

  bool dfs(Nid cur) {
    for (int ei : g.succ[cur]) {
      Nid t = g.edges[ei].to;
      if (t == start) {
        if (!dominated()) {
          bad = path;
          return false;
        }
        continue;
      }
      if (t < start || on_path[t] || !g.reachable[t]) continue;
      if (static_cast<int>(path.size()) >= max_len) continue;
      on_path[t] = 1;
      path.push_back(t);
      bool ok = dfs(t);
      path.pop_back();
      on_path[t] = 0;
      if (!ok) return false;
    }
    return true;
  }
};

} // namespace

DominationVerdict check_domination(const Diagram& d, int max_cycle_len) {
  auto g = local_graph(d);
  DominationVerdict r;
  CircuitSearch s{d, g, max_cycle_len, std::vector<char>(d.nnodes(), 0), {}, -1, {}};
  for (Nid n = 0; n < d.nnodes(); ++n) {
    if (!g.reachable[n]) continue;
    s.start = n;
    s.on_path.assign(d.nnodes(), 0);
    s.on_path[n] = 1;
    s.path = {n};
    if (!s.dfs(n)) {
      r.ok = false;
      r.counterexample = s.bad;
      return r;
    }
  }
  return r;
}

} // namespace negot
