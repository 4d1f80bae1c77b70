#include "negot/expected_cost.hpp"

#include <optional>

namespace negot {

namespace {

ECPair norm(ECPair p) {
  if (p.mass == 0) return {Rat(0), Rat(0), false};
  return p;
}

ECPair ec_compose(const ECPair& a, const ECPair& b) {
  return norm({a.mass * b.mass, a.cost + b.cost, a.infinite || b.infinite});
}

ECPair ec_join(const ECPair& a, const ECPair& b) {
  if (a.mass == 0) return b;
  if (b.mass == 0) return a;
  Rat m = a.mass + b.mass;
  if (a.infinite || b.infinite) return {m, Rat(0), true};
  return {m, (a.mass * a.cost + b.mass * b.cost) / m, false};
}

// Gaussian elimination over the rationals; solves A x = b for several
// right-hand sides at once. Returns nullopt when A is singular.
std::optional<std::vector<std::vector<Rat>>>
solve_linear(std::vector<std::vector<Rat>> a, std::vector<std::vector<Rat>> bs) {
  int n = static_cast<int>(a.size());
  int k = static_cast<int>(bs.size());
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] != 0) { piv = r; break; }
    if (piv < 0) return std::nullopt;
    std::swap(a[col], a[piv]);
    for (int j = 0; j < k; ++j) std::swap(bs[j][col], bs[j][piv]);
    Rat d = a[col][col];
    for (int c = col; c < n; ++c) a[col][c] /= d;
    for (int j = 0; j < k; ++j) bs[j][col] /= d;
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rat f = a[r][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      for (int j = 0; j < k; ++j) bs[j][r] -= f * bs[j][col];
    }
  }
  return bs;
}

} // namespace

std::string show_ec(const ECPair& p) {
  if (p.infinite) return "(" + show_rational(p.mass) + ", inf)";
  return "(" + show_rational(p.mass) + ", " + show_rational(p.cost) + ")";
}

Framework::Val ExpectedCostFramework::iota() const {
  return ECPair{Rat(1), Rat(0), false};
}
Framework::Val ExpectedCostFramework::bottom() const {
  return ECPair{Rat(0), Rat(0), false};
}
Framework::Val ExpectedCostFramework::join_val(const Val& a, const Val& b) const {
  return ec_join(get(a), get(b));
}
bool ExpectedCostFramework::val_equal(const Val& a, const Val& b) const {
  return get(a) == get(b);
}
Framework::Val ExpectedCostFramework::apply(const Xf& f, const Val& v) const {
  return ec_compose(get(v), get(f));
}
std::string ExpectedCostFramework::show_val(const Val& v) const {
  return show_ec(get(v));
}

Framework::Xf ExpectedCostFramework::identity() const {
  return ECPair{Rat(1), Rat(0), false};
}
Framework::Xf ExpectedCostFramework::base(const Diagram& d, Loc l) const {
  const Outcome& o = d.at(l);
  if (!o.prob || !o.cost)
    throw FrameworkError("MissingAnnotation",
                         d.loc_name(l) + " lacks prob or cost");
  return ECPair{*o.prob, *o.cost, false};
}
Framework::Xf ExpectedCostFramework::compose(const Xf& a, const Xf& b) const {
  return ec_compose(get(a), get(b));
}
Framework::Xf ExpectedCostFramework::join(const Xf& a, const Xf& b) const {
  return ec_join(get(a), get(b));
}
bool ExpectedCostFramework::equal(const Xf& a, const Xf& b) const {
  return get(a) == get(b);
}
std::string ExpectedCostFramework::show_xf(const Xf& f) const {
  return show_ec(get(f));
}

Framework::Xf ExpectedCostFramework::flow_solve(const FlowGraph& g) const {
  int n = g.nverts;
  bool inf_edge = false;
  // unknowns: M(v), U(v) for all v; fix the exit row to M=1, U=0
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n, Rat(0)));
  std::vector<std::vector<Rat>> bs(2, std::vector<Rat>(n, Rat(0)));
  for (int v = 0; v < n; ++v) a[v][v] = 1;
  bs[0][g.exit] = 1;
  std::vector<std::vector<Rat>> cmass(n, std::vector<Rat>(n, Rat(0)));
  for (const auto& e : g.edges) {
    if (e.from == g.exit) continue;
    const ECPair& p = get(e.xf);
    if (p.infinite && p.mass != 0) inf_edge = true;
    a[e.from][e.to] -= p.mass;
    cmass[e.from][e.to] += p.mass * p.cost;
  }
  auto m_sol = solve_linear(a, {bs[0]});
  if (!m_sol) return ECPair{Rat(0), Rat(0), true};
  const std::vector<Rat>& M = (*m_sol)[0];
  std::vector<Rat> bu(n, Rat(0));
  for (int v = 0; v < n; ++v) {
    if (v == g.exit) continue;
    for (int w = 0; w < n; ++w) bu[v] += cmass[v][w] * M[w];
  }
  auto u_sol = solve_linear(a, {bu});
  if (!u_sol) return ECPair{Rat(0), Rat(0), true};
  Rat m = M[g.entry];
  if (m == 0) return ECPair{Rat(0), Rat(0), false};
  return ECPair{m, (*u_sol)[0][g.entry] / m, inf_edge};
}

std::vector<Framework::Val>
ExpectedCostFramework::value_fixpoint(const ValueGraph& g) const {
  int n = g.nverts;
  // forward system: mass(v) = [v = root] + sum_in m_e mass(u),
  //                 acc(v)  = sum_in m_e (acc(u) + c_e mass(u))
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n, Rat(0)));
  std::vector<Rat> bm(n, Rat(0));
  for (int v = 0; v < n; ++v) a[v][v] = 1;
  bm[g.root] = 1;
  bool inf_edge = false;
  std::vector<std::vector<Rat>> cmass(n, std::vector<Rat>(n, Rat(0)));
  for (const auto& e : g.edges) {
    const ECPair& p = get(e.xf);
    if (p.infinite && p.mass != 0) inf_edge = true;
    a[e.to][e.from] -= p.mass;
    cmass[e.to][e.from] += p.mass * p.cost;
  }
  auto msol = solve_linear(a, {bm});
  if (!msol)
    throw FrameworkError("Diverged", "probability-1 cycle in value graph");
  const std::vector<Rat>& M = (*msol)[0];
  std::vector<Rat> ba(n, Rat(0));
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u) ba[v] += cmass[v][u] * M[u];
  auto asol = solve_linear(a, {ba});
  if (!asol)
    throw FrameworkError("Diverged", "probability-1 cycle in value graph");
  std::vector<Val> out(n);
  for (int v = 0; v < n; ++v) {
    if (M[v] == 0)
      out[v] = ECPair{Rat(0), Rat(0), false};
    else
      out[v] = ECPair{M[v], (*asol)[0][v] / M[v], inf_edge};
  }
  return out;
}

std::vector<Framework::Val>
ExpectedCostFramework::sample_values(const Diagram&, std::mt19937& rng,
                                     int count) const {
  std::uniform_int_distribution<int> num(0, 6), den(1, 4);
  std::vector<Val> out;
  out.reserve(count);
  out.push_back(iota());
  while (static_cast<int>(out.size()) < count)
    out.push_back(ECPair{Rat(num(rng) + 1, den(rng)), Rat(num(rng), den(rng)),
                         false});
  return out;
}

} // namespace negot
