#include "negot/diagram.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace negot {

Nid Diagram::node_by_name(std::string_view s) const {
  for (Nid i = 0; i < nnodes(); ++i)
    if (nodes[i].name == s) return i;
  return -1;
}

Pid Diagram::proc_by_name(std::string_view s) const {
  for (Pid i = 0; i < nprocs(); ++i)
    if (procs[i] == s) return i;
  return -1;
}

int Diagram::outcome_by_name(Nid n, std::string_view s) const {
  const auto& outs = nodes[n].outs;
  for (int i = 0; i < static_cast<int>(outs.size()); ++i)
    if (outs[i].name == s) return i;
  return -1;
}

std::optional<Loc> Diagram::loc_by_name(std::string_view s) const {
  auto dot = s.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  Nid n = node_by_name(s.substr(0, dot));
  if (n < 0) return std::nullopt;
  int o = outcome_by_name(n, s.substr(dot + 1));
  if (o < 0) return std::nullopt;
  return Loc{n, o};
}

std::vector<Loc> Diagram::locations() const {
  std::vector<Loc> ls;
  for (Nid n = 0; n < nnodes(); ++n)
    for (int o = 0; o < static_cast<int>(nodes[n].outs.size()); ++o)
      ls.push_back({n, o});
  return ls;
}

DiagramBuilder::DiagramBuilder(std::string name, std::vector<std::string> procs) {
  d.name = std::move(name);
  d.procs = std::move(procs);
}

Nid DiagramBuilder::node(const std::string& name,
                         std::initializer_list<std::string> dom, bool is_init,
                         bool is_final) {
  return node(name, std::vector<std::string>(dom), is_init, is_final);
}

Nid DiagramBuilder::node(const std::string& name,
                         const std::vector<std::string>& dom, bool is_init,
                         bool is_final) {
  NodeDef nd;
  nd.name = name;
  for (const auto& p : dom) {
    Pid pid = d.proc_by_name(p);
    if (pid < 0) throw std::runtime_error("unknown process " + p);
    nd.dom.push_back(pid);
  }
  std::sort(nd.dom.begin(), nd.dom.end());
  nd.dom.erase(std::unique(nd.dom.begin(), nd.dom.end()), nd.dom.end());
  for (Pid p : nd.dom) nd.dom_mask |= 1ull << p;
  d.nodes.push_back(std::move(nd));
  Nid id = d.nnodes() - 1;
  if (is_init) d.init = id;
  if (is_final) d.fin = id;
  return id;
}

void DiagramBuilder::outcome(
    const std::string& node, const std::string& name,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& moves,
    std::optional<Rat> prob, std::optional<Rat> cost,
    std::map<std::string, Rat> time) {
  Nid n = d.node_by_name(node);
  if (n < 0) throw std::runtime_error("unknown node " + node);
  Outcome o;
  o.name = name;
  o.prob = std::move(prob);
  o.cost = std::move(cost);
  for (auto& [p, t] : time) {
    Pid pid = d.proc_by_name(p);
    if (pid < 0) throw std::runtime_error("unknown process " + p);
    o.time[pid] = t;
  }
  for (const auto& [p, succs] : moves) {
    Pid pid = d.proc_by_name(p);
    if (pid < 0) throw std::runtime_error("unknown process " + p);
    std::vector<Nid> ts;
    for (const auto& s : succs) {
      Nid t = d.node_by_name(s);
      if (t < 0) throw std::runtime_error("unknown node " + s);
      ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    o.moves[pid] = std::move(ts);
  }
  d.nodes[n].outs.push_back(std::move(o));
}

Diagram DiagramBuilder::take() { return std::move(d); }

std::vector<Violation> validate(const Diagram& d) {
  std::vector<Violation> v;
  auto bad = [&](std::string code, std::string detail) {
    v.push_back({std::move(code), std::move(detail)});
  };
  if (d.init < 0 || d.fin < 0) {
    bad("BadInitFin", "initial or final node missing");
    return v;
  }
  if (d.nodes[d.init].dom_mask != d.all_procs_mask())
    bad("BadInitFin", "dom(" + d.nodes[d.init].name + ") != Proc");
  if (d.nodes[d.fin].dom_mask != d.all_procs_mask())
    bad("BadInitFin", "dom(" + d.nodes[d.fin].name + ") != Proc");
  if (!d.nodes[d.fin].outs.empty())
    bad("BadInitFin", "final node " + d.nodes[d.fin].name + " has outcomes");
  for (Nid n = 0; n < d.nnodes(); ++n) {
    const auto& nd = d.nodes[n];
    if (nd.dom.empty()) bad("DomainViolation", "dom(" + nd.name + ") empty");
    if (n != d.fin && nd.outs.empty())
      bad("MissingDelta", nd.name + " has no outcome");
    bool has_prob = false, all_prob = true;
    Rat sum = 0;
    for (int o = 0; o < static_cast<int>(nd.outs.size()); ++o) {
      const auto& out = nd.outs[o];
      if (out.prob) {
        has_prob = true;
        if (*out.prob < 0 || *out.prob > 1)
          bad("ProbSumViolation",
              "prob(" + nd.name + "." + out.name + ") outside [0,1]");
        sum += *out.prob;
      } else {
        all_prob = false;
      }
      for (Pid p : nd.dom) {
        auto it = out.moves.find(p);
        if (it == out.moves.end()) {
          bad("MissingDelta", "delta(" + nd.name + "," + out.name + "," +
                                  d.procs[p] + ") undefined");
          continue;
        }
        for (Nid t : it->second)
          if (!(d.nodes[t].dom_mask & (1ull << p)))
            bad("DomainViolation", d.procs[p] + " not in dom(" +
                                       d.nodes[t].name + ") targeted by " +
                                       nd.name + "." + out.name);
      }
      for (const auto& [p, ts] : out.moves)
        if (!(nd.dom_mask & (1ull << p)))
          bad("DomainViolation", "delta(" + nd.name + "," + out.name + "," +
                                     d.procs[p] + ") defined outside dom");
    }
    if (has_prob) {
      if (!all_prob)
        bad("ProbSumViolation", nd.name + " has partial prob annotations");
      else if (!nd.outs.empty() && sum != 1)
        bad("ProbSumViolation",
            "prob sum at " + nd.name + " is " + show_rational(sum));
    }
  }
  return v;
}

DetVerdict is_deterministic(const Diagram& d) {
  DetVerdict r;
  for (Nid n = 0; n < d.nnodes(); ++n)
    for (int o = 0; o < static_cast<int>(d.nodes[n].outs.size()); ++o)
      for (const auto& [p, ts] : d.nodes[n].outs[o].moves)
        if (ts.size() > 1) {
          r.deterministic = false;
          r.witnesses.push_back({n, o, p});
        }
  return r;
}

std::size_t ConfigHash::operator()(const Config& c) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (const auto& s : c.at) {
    h = (h ^ s.size()) * 0x100000001b3ull;
    for (Nid n : s) h = (h ^ static_cast<std::size_t>(n)) * 0x100000001b3ull;
  }
  return h;
}

Config initial_config(const Diagram& d) {
  Config c;
  c.at.assign(d.nprocs(), {d.init});
  return c;
}

Config final_config(const Diagram& d) {
  Config c;
  c.at.assign(d.nprocs(), {d.fin});
  return c;
}

bool node_enabled(const Diagram& d, const Config& c, Nid n) {
  for (Pid p : d.nodes[n].dom) {
    const auto& s = c.at[p];
    if (!std::binary_search(s.begin(), s.end(), n)) return false;
  }
  return true;
}

EnabledSet enabled(const Diagram& d, const Config& c) {
  EnabledSet e;
  for (Nid n = 0; n < d.nnodes(); ++n)
    if (node_enabled(d, c, n)) {
      if (d.nodes[n].outs.empty())
        e.terminal.push_back(n);
      else
        e.active.push_back(n);
    }
  return e;
}

std::optional<Config> step(const Diagram& d, const Config& c, Loc l) {
  if (l.node < 0 || l.node >= d.nnodes()) return std::nullopt;
  if (l.out < 0 || l.out >= static_cast<int>(d.nodes[l.node].outs.size()))
    return std::nullopt;
  if (!node_enabled(d, c, l.node)) return std::nullopt;
  Config r = c;
  for (const auto& [p, ts] : d.at(l).moves) r.at[p] = ts;
  return r;
}

ReplayResult replay(const Diagram& d, Config start, std::span<const Loc> w) {
  ReplayResult r;
  r.end = std::move(start);
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    auto next = step(d, r.end, w[i]);
    if (!next) {
      r.ok = false;
      r.fail_index = i;
      return r;
    }
    r.end = std::move(*next);
  }
  return r;
}

bool independent(const Diagram& d, Loc a, Loc b) {
  return (d.dom_mask(a.node) & d.dom_mask(b.node)) == 0;
}

std::vector<Loc> trace_normal_form(const Diagram& d, std::span<const Loc> w) {
  int n = static_cast<int>(w.size());
  // preds[j] = number of earlier dependent positions not yet emitted
  std::vector<int> pending(n, 0);
  std::vector<std::vector<int>> succs(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!independent(d, w[i], w[j])) {
        succs[i].push_back(j);
        ++pending[j];
      }
  std::vector<char> done(n, 0);
  std::vector<Loc> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    int best = -1;
    for (int j = 0; j < n; ++j)
      if (!done[j] && pending[j] == 0)
        if (best < 0 || w[j] < w[best]) best = j;
    done[best] = 1;
    out.push_back(w[best]);
    for (int s : succs[best]) --pending[s];
  }
  return out;
}

bool mazurkiewicz_equivalent(const Diagram& d, std::span<const Loc> w,
                             std::span<const Loc> v) {
  if (w.size() != v.size()) return false;
  return trace_normal_form(d, w) == trace_normal_form(d, v);
}

LocalGraph local_graph(const Diagram& d) {
  LocalGraph g;
  g.succ.resize(d.nnodes());
  for (Nid n = 0; n < d.nnodes(); ++n)
    for (int o = 0; o < static_cast<int>(d.nodes[n].outs.size()); ++o)
      for (const auto& [p, ts] : d.nodes[n].outs[o].moves)
        for (Nid t : ts) {
          g.succ[n].push_back(static_cast<int>(g.edges.size()));
          g.edges.push_back({n, o, p, t});
        }
  g.reachable.assign(d.nnodes(), 0);
  std::vector<Nid> stack{d.init};
  if (d.init >= 0) g.reachable[d.init] = 1;
  while (!stack.empty()) {
    Nid n = stack.back();
    stack.pop_back();
    for (int e : g.succ[n]) {
      Nid t = g.edges[e].to;
      if (!g.reachable[t]) {
        g.reachable[t] = 1;
        stack.push_back(t);
      }
    }
  }
  // DFS three-color cycle detection
  std::vector<int> color(d.nnodes(), 0);
  std::function<bool(Nid)> dfs = [&](Nid n) {
    color[n] = 1;
    for (int e : g.succ[n]) {
      Nid t = g.edges[e].to;
      if (color[t] == 1) return false;
      if (color[t] == 0 && !dfs(t)) return false;
    }
    color[n] = 2;
    return true;
  };
  for (Nid n = 0; n < d.nnodes() && g.acyclic; ++n)
    if (color[n] == 0 && !dfs(n)) g.acyclic = false;
  return g;
}

DomOrder domain_order(const Diagram& d, Nid a, Nid b) {
  auto x = d.dom_mask(a), y = d.dom_mask(b);
  if (x == y) return DomOrder::Equal;
  if ((x & y) == x) return DomOrder::Less;
  if ((x & y) == y) return DomOrder::Greater;
  return DomOrder::Incomparable;
}

} // namespace negot
