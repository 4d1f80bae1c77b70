#include "negot/oracle.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <unordered_map>

namespace negot {

namespace {

constexpr std::size_t kExpansionCap = 5'000'000;

int default_len(const Diagram& d) {
  return 4 * static_cast<int>(d.locations().size());
}

bool contains(const std::vector<Loc>& s, Loc l) {
  return std::find(s.begin(), s.end(), l) != s.end();
}

struct EnumCtx {
  const Diagram& d;
  const PriorityScheduler* sched; // null: all enabled nodes may fire
  int max_len;
  std::size_t max_count;
  Config final;
  RunSet out;
  std::vector<Loc> run;
  std::size_t expansions = 0;

  void dfs(const Config& c) {
    if (out.runs.size() >= max_count) {
      out.truncated = true;
      return;
    }
    if (c == final) {
      out.runs.push_back(run);
      return;
    }
    auto en = enabled(d, c);
    if (en.active.empty()) return; // dead end (or livelock cut elsewhere)
    if (static_cast<int>(run.size()) >= max_len) {
      out.truncated = true;
      return;
    }
    std::vector<Nid> firing;
    if (sched)
      firing.push_back(sched->pick(en.active));
    else
      firing = en.active;
    for (Nid n : firing) {
      for (int o = 0; o < static_cast<int>(d.nodes[n].outs.size()); ++o) {
        if (++expansions > kExpansionCap) {
          out.truncated = true;
          return;
        }
        Loc l{n, o};
        auto next = step(d, c, l);
        if (!next) continue;
        run.push_back(l);
        dfs(*next);
        run.pop_back();
      }
    }
  }
};

RunSet enumerate(const Diagram& d, const PriorityScheduler* s, int max_len,
                 std::size_t max_count) {
  if (max_len < 0) max_len = default_len(d);
  EnumCtx ctx{d, s, max_len, max_count, final_config(d), {}, {}, 0};
  ctx.dfs(initial_config(d));
  return std::move(ctx.out);
}

} // namespace

Nid PriorityScheduler::pick(const std::vector<Nid>& active) const {
  Nid best = active.front();
  for (Nid n : active)
    if (rank[n] < rank[best]) best = n;
  return best;
}

PriorityScheduler scheduler_by_id(const Diagram& d) {
  PriorityScheduler s;
  s.rank.resize(d.nnodes());
  for (int i = 0; i < d.nnodes(); ++i) s.rank[i] = i;
  return s;
}

PriorityScheduler scheduler_reversed(const Diagram& d) {
  PriorityScheduler s;
  s.rank.resize(d.nnodes());
  for (int i = 0; i < d.nnodes(); ++i) s.rank[i] = d.nnodes() - 1 - i;
  return s;
}

PriorityScheduler scheduler_shuffled(const Diagram& d, unsigned seed) {
  std::vector<int> perm(d.nnodes());
  for (int i = 0; i < d.nnodes(); ++i) perm[i] = i;
  std::mt19937 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  PriorityScheduler s;
  s.rank.resize(d.nnodes());
  for (int i = 0; i < d.nnodes(); ++i) s.rank[perm[i]] = i;
  return s;
}

PriorityScheduler scheduler_prefer(const Diagram& d,
                                   const std::vector<std::string>& names) {
  PriorityScheduler s;
  s.rank.assign(d.nnodes(), -1);
  int next = 0;
  for (const auto& nm : names) {
    Nid n = d.node_by_name(nm);
    if (n < 0) throw std::runtime_error("unknown node " + nm);
    if (s.rank[n] < 0) s.rank[n] = next++;
  }
  for (int i = 0; i < d.nnodes(); ++i)
    if (s.rank[i] < 0) s.rank[i] = next++;
  return s;
}

RunSet enumerate_runs(const Diagram& d, const PriorityScheduler& s,
                      int max_len, std::size_t max_count) {
  return enumerate(d, &s, max_len, max_count);
}

RunSet enumerate_all_runs(const Diagram& d, int max_len,
                          std::size_t max_count) {
  return enumerate(d, nullptr, max_len, max_count);
}

std::any brute_mop(const Diagram& d, const Framework& fw,
                   const PriorityScheduler& s, BaseFn base_fn,
                   std::size_t max_configs) {
  if (!base_fn)
    base_fn = [&fw](const Diagram& dd, Loc l) { return fw.base(dd, l); };

  std::vector<Config> verts{initial_config(d)};
  std::unordered_map<Config, int, ConfigHash> index{{verts[0], 0}};
  ValueGraph g;
  g.root = 0;
  std::deque<int> work{0};
  while (!work.empty()) {
    int cur = work.front();
    work.pop_front();
    Config c = verts[cur];
    auto en = enabled(d, c);
    if (en.active.empty()) continue;
    Nid n = s.pick(en.active);
    for (int o = 0; o < static_cast<int>(d.nodes[n].outs.size()); ++o) {
      Loc l{n, o};
      auto next = step(d, c, l);
      if (!next) continue;
      auto [it, fresh] = index.try_emplace(*next, (int)verts.size());
      if (fresh) {
        if (verts.size() >= max_configs)
          throw OracleError("Diverged", "configuration budget exhausted");
        verts.push_back(*next);
        work.push_back(it->second);
      }
      g.edges.push_back({cur, it->second, base_fn(d, l)});
    }
  }
  g.nverts = static_cast<int>(verts.size());
  auto vals = fw.value_fixpoint(g);
  auto it = index.find(final_config(d));
  if (it == index.end()) return fw.bottom();
  return vals[it->second];
}

std::vector<char> trace_order(const Diagram& d, const std::vector<Loc>& run) {
  int n = static_cast<int>(run.size());
  std::vector<char> below(static_cast<std::size_t>(n) * n, 0);
  for (int j = 0; j < n; ++j) {
    below[static_cast<std::size_t>(j) * n + j] = 1;
    std::uint64_t mj = d.dom_mask(run[j].node);
    for (int k = 0; k < j; ++k) {
      if (!(d.dom_mask(run[k].node) & mj)) continue;
      for (int i = 0; i <= k; ++i)
        if (below[static_cast<std::size_t>(k) * n + i])
          below[static_cast<std::size_t>(j) * n + i] = 1;
    }
  }
  return below;
}

namespace {

bool scan_word(const RunLanguageQuery& q, const std::vector<Loc>& w) {
  int n = static_cast<int>(w.size());
  switch (q.kind) {
    case RunQueryKind::E1:
      // gen, then kill-free gap, then focus
      for (int i = 0; i < n; ++i) {
        if (!contains(q.gens, w[i])) continue;
        for (int j = i + 1; j < n; ++j) {
          if (w[j] == q.focus) return true;
          if (contains(q.kills, w[j])) break;
        }
      }
      return false;
    case RunQueryKind::E2:
      // focus whose latest gen/kill predecessor is a kill (or absent)
      for (int j = 0; j < n; ++j) {
        if (w[j] != q.focus) continue;
        bool live_gen = false;
        for (int i = j - 1; i >= 0; --i) {
          if (contains(q.gens, w[i])) {
            live_gen = true;
            break;
          }
          if (contains(q.kills, w[i])) break;
        }
        if (!live_gen) return true;
      }
      return false;
    case RunQueryKind::E3:
      for (int i = 0; i < n; ++i) {
        if (w[i] != q.focus) continue;
        for (int j = i + 1; j < n; ++j) {
          if (contains(q.gens, w[j])) return true;
          if (contains(q.kills, w[j])) break;
        }
      }
      return false;
    case RunQueryKind::E4:
      for (int i = 0; i < n; ++i) {
        if (w[i] != q.focus) continue;
        bool meets_gen = false;
        for (int j = i + 1; j < n; ++j) {
          if (contains(q.gens, w[j])) {
            meets_gen = true;
            break;
          }
          if (contains(q.kills, w[j])) break;
        }
        if (!meets_gen) return true;
      }
      return false;
    case RunQueryKind::Star:
      return false; // handled separately
  }
  return false;
}

bool star_holds(const Diagram& d, const RunLanguageQuery& q,
                const std::vector<Loc>& w) {
  int n = static_cast<int>(w.size());
  auto below = trace_order(d, w);
  auto le = [&](int i, int j) {
    return i <= j && below[static_cast<std::size_t>(j) * n + i];
  };
  for (int i = 0; i < n; ++i) {
    if (w[i] != q.focus) continue;
    for (int j = 0; j < n; ++j) {
      if (w[j] != q.focus2 || le(j, i)) continue;
      bool killed = false;
      for (int k = 0; k < n && !killed; ++k)
        if (k != i && k != j && le(i, k) && le(k, j) && contains(q.kills, w[k]))
          killed = true;
      if (!killed) return true;
    }
  }
  return false;
}

} // namespace

RegexVerdict regex_holds(const Diagram& d, const RunLanguageQuery& q,
                         const PriorityScheduler& s, int max_len,
                         std::size_t max_count) {
  bool star = q.kind == RunQueryKind::Star;
  // E-membership is a word property, not a trace property, so the scheduler
  // restriction would lose witnesses; Star is trace-closed and keeps it.
  RunSet rs = star ? enumerate_runs(d, s, max_len, max_count)
                   : enumerate_all_runs(d, max_len, max_count);
  RegexVerdict v;
  v.truncated = rs.truncated;
  for (const auto& w : rs.runs) {
    bool hit = star ? star_holds(d, q, w) : scan_word(q, w);
    if (hit) {
      v.holds = true;
      v.witness = w;
      return v;
    }
  }
  return v;
}

namespace {

// Structured generator: every block routes all processes of its scope from
// a fresh entry to the given successor node.
struct StructuredGen {
  DiagramBuilder& b;
  std::mt19937& rng;
  int budget; // interior nodes still allowed
  int counter = 0;

  std::string fresh() { return "m" + std::to_string(counter++); }

  int pick(int bound) {
    return std::uniform_int_distribution<int>(0, bound - 1)(rng);
  }

  std::string emit(const std::vector<std::string>& procs,
                   const std::string& succ) {
    if (budget < 1) return succ;
    int roll = pick(10);
    if (roll < 3 || budget < 2) { // atom
      --budget;
      std::string m = fresh();
      b.node(m, procs);
      std::vector<std::pair<std::string, std::vector<std::string>>> mv;
      for (const auto& p : procs) mv.push_back({p, {succ}});
      b.outcome(m, "a", mv);
      return m;
    }
    if (roll < 5) { // sequence
      return emit(procs, emit(procs, succ));
    }
    if (roll < 7 && budget >= 3) { // exclusive choice, re-merging at succ
      --budget;
      std::string c = fresh();
      b.node(c, procs);
      std::string l = emit(procs, succ);
      std::string r = emit(procs, succ);
      std::vector<std::pair<std::string, std::vector<std::string>>> mvl, mvr;
      for (const auto& p : procs) {
        mvl.push_back({p, {l}});
        mvr.push_back({p, {r}});
      }
      b.outcome(c, "l", mvl);
      b.outcome(c, "r", mvr);
      return c;
    }
    if (roll < 9 || procs.size() < 2 || budget < 4) { // guarded loop
      --budget;
      std::string h = fresh();
      b.node(h, procs);
      std::string body = emit(procs, h);
      std::vector<std::pair<std::string, std::vector<std::string>>> mvg, mve;
      for (const auto& p : procs) {
        mvg.push_back({p, {body}});
        mve.push_back({p, {succ}});
      }
      b.outcome(h, "go", mvg);
      b.outcome(h, "exit", mve);
      return h;
    }
    // parallel split/join over a two-way partition of the scope
    budget -= 2;
    std::string j = fresh();
    b.node(j, procs);
    std::vector<std::pair<std::string, std::vector<std::string>>> mvj;
    for (const auto& p : procs) mvj.push_back({p, {succ}});
    b.outcome(j, "a", mvj);
    int cut = 1 + pick(static_cast<int>(procs.size()) - 1);
    std::vector<std::string> left(procs.begin(), procs.begin() + cut);
    std::vector<std::string> right(procs.begin() + cut, procs.end());
    std::string el = emit(left, j);
    std::string er = emit(right, j);
    std::string sp = fresh();
    b.node(sp, procs);
    std::vector<std::pair<std::string, std::vector<std::string>>> mvs;
    for (const auto& p : left) mvs.push_back({p, {el}});
    for (const auto& p : right) mvs.push_back({p, {er}});
    b.outcome(sp, "a", mvs);
    return sp;
  }
};

Diagram build_structured(std::mt19937& rng, int nprocs, int max_nodes) {
  std::vector<std::string> procs;
  for (int i = 0; i < nprocs; ++i) procs.push_back("p" + std::to_string(i));
  DiagramBuilder b("gen", procs);
  b.node("init", procs, true);
  b.node("fin", procs, false, true);
  StructuredGen g{b, rng, max_nodes - 2};
  std::string root = g.emit(procs, "fin");
  std::vector<std::pair<std::string, std::vector<std::string>>> mv;
  for (const auto& p : procs) mv.push_back({p, {root}});
  b.outcome("init", "a", mv);
  return b.take();
}

std::optional<Diagram> try_random(std::mt19937& rng, int nprocs,
                                  int max_nodes) {
  std::vector<std::string> procs;
  for (int i = 0; i < nprocs; ++i) procs.push_back("p" + std::to_string(i));
  auto pick = [&](int bound) {
    return std::uniform_int_distribution<int>(0, bound - 1)(rng);
  };
  int k = std::max(3, 2 + pick(std::max(1, max_nodes - 1)));
  DiagramBuilder b("gen", procs);
  std::vector<std::vector<std::string>> doms(k);
  doms[0] = procs;
  doms[k - 1] = procs;
  for (int i = 1; i < k - 1; ++i) {
    std::uint64_t m = 1 + pick((1 << nprocs) - 1);
    for (int p = 0; p < nprocs; ++p)
      if (m & (1ull << p)) doms[i].push_back(procs[p]);
  }
  for (int i = 0; i < k; ++i)
    b.node("r" + std::to_string(i), doms[i], i == 0, i == k - 1);
  // per process, the nodes it participates in (targets for its moves)
  for (int i = 0; i < k - 1; ++i) {
    int nouts = 1 + pick(2);
    for (int o = 0; o < nouts; ++o) {
      std::vector<std::pair<std::string, std::vector<std::string>>> mv;
      for (const auto& p : doms[i]) {
        std::vector<int> cands;
        for (int j = 1; j < k; ++j)
          if (std::find(doms[j].begin(), doms[j].end(), p) != doms[j].end())
            cands.push_back(j);
        mv.push_back({p, {"r" + std::to_string(cands[pick((int)cands.size())])}});
      }
      b.outcome("r" + std::to_string(i), o ? "b" : "a", mv);
    }
  }
  Diagram d = b.take();
  if (!validate(d).empty()) return std::nullopt;
  if (!is_deterministic(d).deterministic) return std::nullopt;
  if (check_soundness(d, 20000).status != SoundStatus::Sound)
    return std::nullopt;
  return d;
}

} // namespace

Diagram generate_sound_diagram(unsigned seed, int nprocs, int max_nodes,
                               GenStats* stats) {
  if (nprocs < 1 || nprocs > 16 || max_nodes < 2)
    throw OracleError("GenerationFailed", "size parameters out of range");
  std::mt19937 rng(seed * 2654435761u + 1);
  GenStats local;
  GenStats& st = stats ? *stats : local;
  std::string mode = "combinator";
  std::optional<Diagram> d;
  if (seed % 5 == 0) {
    for (int t = 0; t < 40 && !d; ++t) {
      ++st.attempted;
      d = try_random(rng, nprocs, max_nodes);
      if (d) ++st.accepted;
    }
    if (d) mode = "random";
  }
  if (!d) d = build_structured(rng, nprocs, max_nodes);
  AnalysisBlock prov;
  prov.name = "provenance";
  prov.entries["seed"] = std::to_string(seed);
  prov.entries["mode"] = mode;
  prov.entries["attempted"] = std::to_string(st.attempted);
  prov.entries["accepted"] = std::to_string(st.accepted);
  d->analyses.push_back(std::move(prov));
  return std::move(*d);
}

} // namespace negot
