#include "negot/max_plus.hpp"

namespace negot {

MPNum mp_add(const MPNum& a, const MPNum& b) {
  if (a.kind == -1 || b.kind == -1) return MPNum::ninf();
  if (a.kind == +1 || b.kind == +1) return MPNum::pinf();
  return MPNum::fin(a.v + b.v);
}

bool mp_less(const MPNum& a, const MPNum& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.kind == 0 && a.v < b.v;
}

MPNum mp_max(const MPNum& a, const MPNum& b) { return mp_less(a, b) ? b : a; }

std::string show_mp(const MPNum& a) {
  if (a.kind == -1) return "-inf";
  if (a.kind == +1) return "inf";
  return show_rational(a.v);
}

MPMat MPMat::ident(int n) {
  MPMat m{n, std::vector<MPNum>(n * n, MPNum::ninf())};
  for (int i = 0; i < n; ++i) m.at(i, i) = MPNum::fin(Rat(0));
  return m;
}

MPMat MPMat::zero(int n) {
  return {n, std::vector<MPNum>(n * n, MPNum::ninf())};
}

MPNum makespan(const MPVec& v) {
  MPNum m = MPNum::ninf();
  for (const auto& x : v) m = mp_max(m, x);
  return m;
}

std::string show_mp_vec(const MPVec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += show_mp(v[i]);
  }
  return s + "]";
}

namespace {

// g after f: (g.f)(p,q) = max_k g(p,k) + f(k,q)
MPMat mp_mul(const MPMat& g, const MPMat& f) {
  MPMat r = MPMat::zero(g.n);
  for (int p = 0; p < g.n; ++p)
    for (int k = 0; k < g.n; ++k) {
      if (g.at(p, k).kind == -1) continue;
      for (int q = 0; q < g.n; ++q)
        r.at(p, q) = mp_max(r.at(p, q), mp_add(g.at(p, k), f.at(k, q)));
    }
  return r;
}

MPMat mp_join(const MPMat& a, const MPMat& b) {
  MPMat r = a;
  for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = mp_max(r.a[i], b.a[i]);
  return r;
}

} // namespace

Framework::Val MaxPlusFramework::iota() const {
  return MPVec(n_, MPNum::fin(Rat(0)));
}
Framework::Val MaxPlusFramework::bottom() const {
  return MPVec(n_, MPNum::ninf());
}
Framework::Val MaxPlusFramework::join_val(const Val& a, const Val& b) const {
  const auto& x = std::any_cast<const MPVec&>(a);
  const auto& y = std::any_cast<const MPVec&>(b);
  MPVec r(n_);
  for (int i = 0; i < n_; ++i) r[i] = mp_max(x[i], y[i]);
  return r;
}
bool MaxPlusFramework::val_equal(const Val& a, const Val& b) const {
  return std::any_cast<const MPVec&>(a) == std::any_cast<const MPVec&>(b);
}
Framework::Val MaxPlusFramework::apply(const Xf& f, const Val& v) const {
  const MPMat& m = get(f);
  const auto& x = std::any_cast<const MPVec&>(v);
  MPVec r(n_, MPNum::ninf());
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q)
      r[p] = mp_max(r[p], mp_add(m.at(p, q), x[q]));
  return r;
}
std::string MaxPlusFramework::show_val(const Val& v) const {
  return show_mp_vec(std::any_cast<const MPVec&>(v));
}

Framework::Xf MaxPlusFramework::identity() const { return MPMat::ident(n_); }

Framework::Xf MaxPlusFramework::base(const Diagram& d, Loc l) const {
  const NodeDef& nd = d.nodes[l.node];
  const Outcome& o = d.at(l);
  MPMat m = MPMat::zero(n_);
  for (Pid p : nd.dom) {
    auto it = o.time.find(p);
    if (it == o.time.end())
      throw FrameworkError("MissingAnnotation",
                           d.loc_name(l) + " lacks time for " + d.procs[p]);
    for (Pid q : nd.dom) m.at(p, q) = MPNum::fin(it->second);
  }
  for (int p = 0; p < n_; ++p)
    if (!(nd.dom_mask & (1ull << p))) m.at(p, p) = MPNum::fin(Rat(0));
  return m;
}
Framework::Xf MaxPlusFramework::compose(const Xf& a, const Xf& b) const {
  return mp_mul(get(b), get(a));
}
Framework::Xf MaxPlusFramework::join(const Xf& a, const Xf& b) const {
  return mp_join(get(a), get(b));
}
bool MaxPlusFramework::equal(const Xf& a, const Xf& b) const {
  return get(a) == get(b);
}
std::string MaxPlusFramework::show_xf(const Xf& f) const {
  const MPMat& m = get(f);
  std::string s = "[";
  for (int r = 0; r < m.n; ++r) {
    if (r) s += "; ";
    for (int c = 0; c < m.n; ++c) {
      if (c) s += ", ";
      s += show_mp(m.at(r, c));
    }
  }
  return s + "]";
}

Framework::Xf MaxPlusFramework::flow_solve(const FlowGraph& g) const {
  std::vector<std::vector<int>> out(g.nverts);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    out[g.edges[e].from].push_back(e);
  std::vector<MPMat> t(g.nverts, MPMat::zero(n_));
  t[g.exit] = MPMat::ident(n_);

  auto round = [&]() {
    bool changed = false;
    for (int v = 0; v < g.nverts; ++v) {
      if (v == g.exit) continue;
      MPMat acc = MPMat::zero(n_);
      for (int e : out[v])
        acc = mp_join(acc, mp_mul(t[g.edges[e].to], get(g.edges[e].xf)));
      if (!(acc == t[v])) {
        t[v] = std::move(acc);
        changed = true;
      }
    }
    return changed;
  };

  // any change past the acyclic bound is driven by a positive cycle
  int acyclic_bound = g.nverts * n_ + 1;
  for (int outer = 0; outer <= g.nverts * n_ * n_ + 1; ++outer) {
    bool changed = false;
    for (int i = 0; i < acyclic_bound; ++i)
      if (!(changed = round())) break;
    if (!changed) return t[g.entry];
    std::vector<MPMat> before = t;
    round();
    bool marked = false;
    for (int v = 0; v < g.nverts; ++v)
      for (std::size_t i = 0; i < t[v].a.size(); ++i)
        if (!(t[v].a[i] == before[v].a[i])) {
          t[v].a[i] = MPNum::pinf();
          marked = true;
        }
    if (!marked) return t[g.entry];
  }
  throw FrameworkError("Diverged", "max-plus flow_solve did not stabilize");
}

std::vector<Framework::Val>
MaxPlusFramework::value_fixpoint(const ValueGraph& g) const {
  std::vector<std::vector<int>> in(g.nverts);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    in[g.edges[e].to].push_back(e);
  std::vector<MPVec> v(g.nverts, MPVec(n_, MPNum::ninf()));
  MPVec root0(n_, MPNum::fin(Rat(0)));

  auto round = [&]() {
    bool changed = false;
    for (int w = 0; w < g.nverts; ++w) {
      MPVec acc = (w == g.root) ? root0 : MPVec(n_, MPNum::ninf());
      for (int e : in[w]) {
        const MPMat& m = get(g.edges[e].xf);
        const MPVec& x = v[g.edges[e].from];
        for (int p = 0; p < n_; ++p)
          for (int q = 0; q < n_; ++q)
            acc[p] = mp_max(acc[p], mp_add(m.at(p, q), x[q]));
      }
      if (!(acc == v[w])) {
        v[w] = std::move(acc);
        changed = true;
      }
    }
    return changed;
  };

  int acyclic_bound = g.nverts * n_ + 1;
  for (int outer = 0; outer <= g.nverts * n_ + 1; ++outer) {
    bool changed = false;
    for (int i = 0; i < acyclic_bound; ++i)
      if (!(changed = round())) break;
    if (!changed) break;
    std::vector<MPVec> before = v;
    round();
    bool marked = false;
    for (int w = 0; w < g.nverts; ++w)
      for (int p = 0; p < n_; ++p)
        if (!(v[w][p] == before[w][p])) {
          v[w][p] = MPNum::pinf();
          marked = true;
        }
    if (!marked) break;
  }
  std::vector<Val> out(g.nverts);
  for (int w = 0; w < g.nverts; ++w) out[w] = v[w];
  return out;
}

std::vector<Framework::Val>
MaxPlusFramework::sample_values(const Diagram&, std::mt19937& rng,
                                int count) const {
  std::uniform_int_distribution<int> num(0, 8), den(1, 3);
  std::vector<Val> out;
  out.reserve(count);
  out.push_back(iota());
  while (static_cast<int>(out.size()) < count) {
    MPVec v(n_);
    for (int p = 0; p < n_; ++p) v[p] = MPNum::fin(Rat(num(rng), den(rng)));
    out.push_back(std::move(v));
  }
  return out;
}

} // namespace negot
