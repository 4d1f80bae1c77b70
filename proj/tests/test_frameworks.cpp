#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "negot/expected_cost.hpp"
#include "negot/genkill.hpp"
#include "negot/invariance.hpp"
#include "negot/max_plus.hpp"

using namespace negot;

namespace {

Loc L(const Diagram& d, const char* s) {
  auto l = d.loc_by_name(s);
  REQUIRE(l.has_value());
  return *l;
}

ECPair ec(int mn, int md, int cn, int cd = 1) {
  return {Rat(mn, md), Rat(cn, cd), false};
}

} // namespace

TEST_CASE("expected cost: algebra") {
  ExpectedCostFramework fw;
  auto c = fw.compose(ec(1, 2, 1), ec(1, 3, 2));
  CHECK(ExpectedCostFramework::get(c) == ec(1, 6, 3));
  auto j = fw.join(ec(1, 2, 1), ec(1, 2, 3));
  CHECK(ExpectedCostFramework::get(j) == ec(1, 1, 2));
  // mass-0 operand is the join identity
  auto j0 = fw.join(ec(0, 1, 7), ec(1, 2, 3));
  CHECK(ExpectedCostFramework::get(j0) == ec(1, 2, 3));
  auto v = fw.apply(ec(1, 2, 5), fw.iota());
  CHECK(ExpectedCostFramework::get(v) == ec(1, 2, 5));
}

TEST_CASE("expected cost: loop absorption system") {
  // two-state loop: v0 exits with prob 1/2 cost 1, else detours v2 and back,
  // each step cost 1; conditional expected total cost 3
  ExpectedCostFramework fw;
  FlowGraph g;
  g.nverts = 3;
  g.entry = 0;
  g.exit = 1;
  g.edges.push_back({0, 1, ec(1, 2, 1)});
  g.edges.push_back({0, 2, ec(1, 2, 1)});
  g.edges.push_back({2, 0, ec(1, 1, 1)});
  auto r = ExpectedCostFramework::get(fw.flow_solve(g));
  CHECK(r == ec(1, 1, 3));
}

TEST_CASE("expected cost: probability-1 cycle is flagged") {
  ExpectedCostFramework fw;
  FlowGraph g;
  g.nverts = 2;
  g.entry = 0;
  g.exit = 1;
  g.edges.push_back({0, 0, ec(1, 1, 1)});
  auto r = ExpectedCostFramework::get(fw.flow_solve(g));
  CHECK(r.infinite);
}

TEST_CASE("expected cost: forward values") {
  ExpectedCostFramework fw;
  ValueGraph g;
  g.nverts = 3;
  g.root = 0;
  g.edges.push_back({0, 1, ec(1, 2, 1)});
  g.edges.push_back({0, 2, ec(1, 2, 2)});
  g.edges.push_back({1, 2, ec(1, 1, 4)});
  auto vs = fw.value_fixpoint(g);
  CHECK(ExpectedCostFramework::get(vs[1]) == ec(1, 2, 1));
  // reaching v2: 1/2 * cost 2 direct, 1/2 * cost 5 via v1
  CHECK(ExpectedCostFramework::get(vs[2]) == ec(1, 1, 7, 2));
}

TEST_CASE("expected cost: missing annotation") {
  ExpectedCostFramework fw;
  Diagram d = fixtures::fig1();
  CHECK_THROWS_AS((void)fw.base(d, L(d, "n0.reg")), FrameworkError);
}

TEST_CASE("max-plus: base and composition") {
  Diagram d = fixtures::fig1();
  fixtures::annotate_uniform(d);
  MaxPlusFramework fw(2);
  auto reg = fw.base(d, L(d, "n0.reg"));
  auto send = fw.base(d, L(d, "n1.send"));
  const MPMat& ms = MaxPlusFramework::get(send);
  CHECK(ms.at(0, 0) == MPNum::fin(Rat(1)));
  CHECK(ms.at(1, 1) == MPNum::fin(Rat(0)));
  CHECK(ms.at(0, 1) == MPNum::ninf());

  auto v = std::any_cast<MPVec>(
      fw.apply(fw.compose(reg, send), fw.iota()));
  CHECK(v[0] == MPNum::fin(Rat(2)));
  CHECK(v[1] == MPNum::fin(Rat(1)));
  CHECK(makespan(v) == MPNum::fin(Rat(2)));
}

TEST_CASE("max-plus: positive cycle diverges to +inf") {
  MaxPlusFramework fw(1);
  MPMat one{1, {MPNum::fin(Rat(1))}};
  FlowGraph g;
  g.nverts = 2;
  g.entry = 0;
  g.exit = 1;
  g.edges.push_back({0, 0, one});
  g.edges.push_back({0, 1, one});
  MPMat r = MaxPlusFramework::get(fw.flow_solve(g));
  CHECK(r.at(0, 0) == MPNum::pinf());
}

TEST_CASE("max-plus: zero-weight cycle stabilizes") {
  MaxPlusFramework fw(1);
  MPMat zero{1, {MPNum::fin(Rat(0))}};
  MPMat one{1, {MPNum::fin(Rat(1))}};
  FlowGraph g;
  g.nverts = 2;
  g.entry = 0;
  g.exit = 1;
  g.edges.push_back({0, 0, zero});
  g.edges.push_back({0, 1, one});
  MPMat r = MaxPlusFramework::get(fw.flow_solve(g));
  CHECK(r.at(0, 0) == MPNum::fin(Rat(1)));
}

TEST_CASE("genkill: detection across concurrency") {
  Diagram d = fixtures::fig1();
  // gen = send, kill = eval, target = OK: eval can be linearized before
  // send, so a clean interval exists
  GKSpec spec;
  spec.gens = {L(d, "n1.send")};
  spec.kills = {L(d, "n2.eval")};
  spec.targets = {L(d, "n6.OK")};
  GenKillFramework fw(d, spec);
  std::vector<Loc> run = {L(d, "n0.reg"),  L(d, "n1.send"), L(d, "n2.eval"),
                          L(d, "n3.tout"), L(d, "n4.pr"),   L(d, "n5.done"),
                          L(d, "n6.OK")};
  auto xf = fw.identity();
  for (Loc l : run) xf = fw.compose(xf, fw.base(d, l));
  CHECK(fw.detects(fw.apply(xf, fw.iota())));
}

TEST_CASE("genkill: causally forced kill blocks detection") {
  Diagram d = fixtures::fig1();
  // done always lies causally between send..OK
  GKSpec spec;
  spec.gens = {L(d, "n1.send")};
  spec.kills = {L(d, "n5.done")};
  spec.targets = {L(d, "n6.OK")};
  GenKillFramework fw(d, spec);
  std::vector<Loc> run = {L(d, "n0.reg"),  L(d, "n1.send"), L(d, "n2.eval"),
                          L(d, "n3.tout"), L(d, "n4.pr"),   L(d, "n5.done"),
                          L(d, "n6.OK")};
  auto xf = fw.identity();
  for (Loc l : run) xf = fw.compose(xf, fw.base(d, l));
  CHECK(!fw.detects(fw.apply(xf, fw.iota())));
}

TEST_CASE("genkill: end-of-run detection") {
  Diagram d = fixtures::fig1();
  GKSpec spec;
  spec.gens = {L(d, "n1.send")};
  spec.kills = {};
  spec.targets = {};
  spec.detect_at_end = true;
  GenKillFramework fw(d, spec);
  auto v = std::any_cast<GKVal>(fw.iota());
  for (Loc l : {L(d, "n0.reg"), L(d, "n1.send")}) v = fw.step_val(d, l, v);
  CHECK(fw.detects(v));
  GKSpec spec2 = spec;
  spec2.kills = {L(d, "n3.tout")};
  GenKillFramework fw2(d, spec2);
  auto v2 = std::any_cast<GKVal>(fw2.iota());
  for (Loc l : {L(d, "n0.reg"), L(d, "n1.send"), L(d, "n3.tout")})
    v2 = fw2.step_val(d, l, v2);
  CHECK(!fw2.detects(v2));
}

TEST_CASE("genkill: variant compilation polarities") {
  Diagram d = fixtures::fig1();
  auto mf = compile_genkill_variant(d, {L(d, "n1.send")}, {L(d, "n2.eval")},
                                    L(d, "n6.OK"), GKVariant::MustForward);
  CHECK(mf.negate);
  CHECK(mf.spec.virtual_start);
  CHECK(mf.spec.gens == std::vector<Loc>{L(d, "n2.eval")});
  CHECK(mf.spec.kills ==
        std::vector<Loc>({L(d, "n1.send"), L(d, "n2.eval")}));
  auto mb = compile_genkill_variant(d, {L(d, "n1.send")}, {L(d, "n2.eval")},
                                    L(d, "n0.reg"), GKVariant::MustBackward);
  CHECK(mb.negate);
  CHECK(mb.spec.detect_at_end);
  CHECK(mb.spec.gens == std::vector<Loc>{L(d, "n0.reg")});
  auto may = compile_genkill_variant(d, {L(d, "n1.send")}, {L(d, "n2.eval")},
                                     L(d, "n6.OK"), GKVariant::MayForward);
  CHECK(!may.negate);
  CHECK(may.spec.targets == std::vector<Loc>{L(d, "n6.OK")});
}

TEST_CASE("invariance: arithmetic frameworks commute") {
  Diagram d2 = fixtures::fig2();
  fixtures::annotate_uniform(d2);
  ExpectedCostFramework ec_fw;
  CHECK(check_invariance(d2, ec_fw).invariant);
  MaxPlusFramework mp_fw(3);
  CHECK(check_invariance(d2, mp_fw).invariant);
  CHECK(check_invariance(d2, mp_fw, InvarianceMode::Sampled).invariant);
}

TEST_CASE("invariance: genkill commutes") {
  Diagram d2 = fixtures::fig2();
  GKSpec spec;
  spec.gens = {L(d2, "n3.a")};
  spec.kills = {L(d2, "n4.a")};
  spec.targets = {L(d2, "n7.a")};
  GenKillFramework fw(d2, spec);
  CHECK(check_invariance(d2, fw).invariant);
  GKSpec spec2;
  spec2.gens = {L(d2, "n1.a")};
  spec2.kills = {L(d2, "n2.a"), L(d2, "n5.a")};
  spec2.targets = {L(d2, "n6.a")};
  spec2.virtual_start = true;
  GenKillFramework fw2(d2, spec2);
  CHECK(check_invariance(d2, fw2).invariant);
}

TEST_CASE("invariance: the naive framework fails on independent gen/kill") {
  Diagram d = fixtures::fig1();
  NaiveGenKillFramework fw(L(d, "n1.send"), L(d, "n6.OK"),
                           {L(d, "n2.eval")});
  auto v = check_invariance(d, fw);
  REQUIRE(!v.invariant);
  CHECK(v.witness->first == L(d, "n1.send"));
  CHECK(v.witness->second == L(d, "n2.eval"));
  CHECK(v.lhs != v.rhs);
  auto vs = check_invariance(d, fw, InvarianceMode::Sampled);
  CHECK(!vs.invariant);
}
