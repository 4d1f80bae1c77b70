#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <variant>

#include "fixtures.hpp"
#include "negot/engine.hpp"
#include "negot/expected_cost.hpp"
#include "negot/genkill.hpp"
#include "negot/max_plus.hpp"
#include "negot/oracle.hpp"

using namespace negot;

namespace {

Loc L(const Diagram& d, const char* s) {
  auto l = d.loc_by_name(s);
  REQUIRE(l.has_value());
  return *l;
}

ReducedState fresh_state(const Diagram& d) {
  ReducedState st;
  st.node_reduced.assign(d.nnodes(), 0);
  for (Nid n = 0; n < d.nnodes(); ++n)
    if (d.nodes[n].outs.empty()) st.node_reduced[n] = 1;
  refresh_pruned(d, st);
  return st;
}

ECPair ecv(const std::any& a) { return ExpectedCostFramework::get(a); }

} // namespace

TEST_CASE("is_reduced_node: syntactic test on fig2") {
  Diagram d = fixtures::fig2();
  ReducedState st = fresh_state(d);
  // n1's only outcome already lands where nothing smaller can fire
  CHECK(is_reduced_node(d, st, d.node_by_name("n1")));
  CHECK(!is_reduced_node(d, st, d.node_by_name("n3")));
  // n0 requires the smaller-domain nodes to be settled first
  CHECK_THROWS_AS((void)is_reduced_node(d, st, d.node_by_name("n0")),
                  EngineError);
}

TEST_CASE("red_location: rewires to the saturation endpoint") {
  Diagram d = fixtures::fig2();
  fixtures::annotate_uniform(d);
  ReducedState st = fresh_state(d);
  ExpectedCostFramework fw;
  Nid n3 = d.node_by_name("n3");
  red_location(d, st, fw, {n3, 0});
  CHECK(d.nodes[n3].outs[0].name == "a{n3.a}");
  CHECK(d.nodes[n3].outs[0].moves.begin()->second ==
        std::vector<Nid>{d.node_by_name("n7")});
  CHECK(ecv(st.registry.at("a{n3.a}")) == ECPair{Rat(1, 2), Rat(1), false});
  CHECK_THROWS_AS(red_location(d, st, fw, {n3, 0}), EngineError);
}

TEST_CASE("red_node: single exit edge degenerates to its transformer") {
  Diagram d = fixtures::fig2();
  fixtures::annotate_uniform(d);
  ReducedState st = fresh_state(d);
  ExpectedCostFramework fw;
  Nid n1 = d.node_by_name("n1");
  auto rep = replication_mop(d, st, fw, n1);
  CHECK(rep.members == std::vector<Nid>{n1});
  CHECK(ecv(rep.xf) == ECPair{Rat(1), Rat(1), false});
  red_node(d, st, fw, n1, &rep);
  CHECK(d.nodes[n1].outs.size() == 1);
  CHECK(d.nodes[n1].outs[0].name == "a{n1}");
  CHECK_THROWS_AS(red_node(d, st, fw, n1), EngineError);
}

TEST_CASE("compute_mop: fig2 expected cost") {
  Diagram d = fixtures::fig2();
  fixtures::annotate_uniform(d);
  ExpectedCostFramework fw;
  auto res = compute_mop(d, fw);
  CHECK(ecv(res.value) == ECPair{Rat(1), Rat(18), false});

  // intermediate registry entries of the reduction
  const auto& reg = res.trace.registries.back();
  CHECK(ecv(reg.at("a{n3}")) == ECPair{Rat(1), Rat(3), false});
  CHECK(ecv(reg.at("a{n2.a}")) == ECPair{Rat(1), Rat(7), false});
  CHECK(ecv(reg.at("a{n7}")) == ECPair{Rat(1), Rat(9), false});
  CHECK(ecv(reg.at("a{n2}")) == ECPair{Rat(1), Rat(16), false});
  CHECK(ecv(reg.at("a{n0.a}")) == ECPair{Rat(1), Rat(18), false});

  // n3 carries its synthetic single outcome in the final snapshot
  const Diagram& last = res.trace.snapshots.back();
  Nid n3 = last.node_by_name("n3");
  REQUIRE(last.nodes[n3].outs.size() == 1);
  CHECK(last.nodes[n3].outs[0].name == "a{n3}");
  ReducedState st = fresh_state(last);
  for (auto& f : st.node_reduced) f = 1;
  st.node_reduced[n3] = 0;
  CHECK(is_reduced_node(last, st, n3));

  // reversed stage order reaches the same result
  auto rev = compute_mop(d, fw, false, true);
  CHECK(ecv(rev.value) == ecv(res.value));
}

TEST_CASE("compute_mop: fig1 expected cost matches the oracle") {
  Diagram d = fixtures::fig1();
  fixtures::annotate_uniform(d);
  ExpectedCostFramework fw;
  auto res = compute_mop(d, fw, false);
  CHECK(ecv(res.value) == ECPair{Rat(1), Rat(7), false});
  auto v = brute_mop(d, fw, scheduler_by_id(d));
  CHECK(fw.val_equal(res.value, v));
}

TEST_CASE("compute_mop: max-plus makespan") {
  Diagram a = fixtures::fig1_acyclic();
  fixtures::annotate_uniform(a);
  MaxPlusFramework fw(2);
  auto res = compute_mop(a, fw, false);
  auto v = std::any_cast<MPVec>(res.value);
  CHECK(makespan(v) == MPNum::fin(Rat(6)));
  CHECK(fw.val_equal(res.value, brute_mop(a, fw, scheduler_by_id(a))));

  Diagram d = fixtures::fig1(); // retry loop with positive times
  fixtures::annotate_uniform(d);
  auto loop = compute_mop(d, fw, false);
  CHECK(makespan(std::any_cast<MPVec>(loop.value)) == MPNum::pinf());
}

TEST_CASE("compute_mop: genkill detection agrees with the regex oracle") {
  Diagram d = fixtures::fig2();
  auto cg = compile_genkill_variant(d, {L(d, "n3.b")}, {}, L(d, "n7.a"),
                                    GKVariant::MayForward);
  GenKillFramework fw(d, cg.spec);
  auto res = compute_mop(d, fw, false);
  CHECK(fw.detects(res.value));
  CHECK(fw.detects(brute_mop(d, fw, scheduler_by_id(d))));
  RunLanguageQuery q;
  q.kind = RunQueryKind::E1;
  q.gens = {L(d, "n3.b")};
  q.focus = L(d, "n7.a");
  CHECK(regex_holds(d, q, scheduler_by_id(d), 14, 20000).holds);
}

namespace {

// One-point lattice; everything collapses, so the final transformer is the
// identity by construction.
class IdentityFramework final : public Framework {
public:
  std::string name() const override { return "identity"; }
  Val iota() const override { return 0; }
  Val bottom() const override { return 0; }
  Val join_val(const Val&, const Val&) const override { return 0; }
  bool val_equal(const Val&, const Val&) const override { return true; }
  Val apply(const Xf&, const Val&) const override { return 0; }
  std::string show_val(const Val&) const override { return "*"; }
  Xf identity() const override { return std::monostate{}; }
  Xf base(const Diagram&, Loc) const override { return std::monostate{}; }
  Xf compose(const Xf&, const Xf&) const override { return std::monostate{}; }
  Xf join(const Xf&, const Xf&) const override { return std::monostate{}; }
  bool equal(const Xf&, const Xf&) const override { return true; }
  std::string show_xf(const Xf&) const override { return "id"; }
};

} // namespace

TEST_CASE("compute_mop: one-point framework returns the identity") {
  Diagram d = fixtures::fig2();
  IdentityFramework fw;
  auto res = compute_mop(d, fw, false);
  CHECK(fw.equal(res.xf, fw.identity()));
  CHECK(fw.val_equal(res.value, fw.iota()));

  // an empty genkill spec likewise never detects anything
  GenKillFramework gk(d, GKSpec{});
  auto r2 = compute_mop(d, gk, false);
  CHECK(!gk.detects(r2.value));
}

TEST_CASE("compute_mop: nondeterministic input is rejected") {
  Diagram d = fixtures::fig4();
  ExpectedCostFramework fw;
  CHECK_THROWS_AS((void)compute_mop(d, fw), EngineError);
}

TEST_CASE("compute_mop: unsound input fails with evidence") {
  Diagram d = fixtures::fig1();
  // drop the OK outcome: the retry loop can never exit
  Nid n6 = d.node_by_name("n6");
  d.nodes[n6].outs.pop_back();
  fixtures::annotate_uniform(d);
  ExpectedCostFramework fw;
  try {
    (void)compute_mop(d, fw);
    FAIL("expected an engine error");
  } catch (const EngineError& e) {
    CHECK(e.code == "NotSoundEvidence");
  }
}

TEST_CASE("reduction trace: semantics preserved after every step") {
  Diagram d = fixtures::fig2();
  fixtures::annotate_uniform(d);
  ExpectedCostFramework fw;
  auto res = compute_mop(d, fw);
  auto s = scheduler_by_id(d);
  REQUIRE(!res.trace.snapshots.empty());
  for (std::size_t i = 0; i < res.trace.snapshots.size(); ++i) {
    const auto& reg = res.trace.registries[i];
    BaseFn bf = [&fw, &reg](const Diagram& dd, Loc l) {
      auto it = reg.find(dd.at(l).name);
      return it != reg.end() ? it->second : fw.base(dd, l);
    };
    auto v = brute_mop(res.trace.snapshots[i], fw, s, bf);
    CHECK(ecv(v) == ECPair{Rat(1), Rat(18), false});
  }
  // progress: the reachable location count never grows and the loop is short
  for (std::size_t i = 1; i < res.trace.reachable_locs.size(); ++i)
    CHECK(res.trace.reachable_locs[i] <= res.trace.reachable_locs[i - 1]);
  CHECK(res.trace.steps.size() <= d.locations().size() + d.nnodes());
}

TEST_CASE("compute_mop: agreement with the oracle on generated diagrams") {
  ExpectedCostFramework fw;
  for (unsigned seed = 1; seed <= 20; ++seed) {
    Diagram d = generate_sound_diagram(seed, 1 + seed % 3, 10);
    fixtures::annotate_uniform(d);
    CAPTURE(seed);
    auto res = compute_mop(d, fw, false);
    auto v = brute_mop(d, fw, scheduler_shuffled(d, seed));
    CHECK(fw.val_equal(res.value, v));
  }
}

TEST_CASE("compute_mop: trivial diagram returns the base transformer") {
  Diagram d = generate_sound_diagram(1, 1, 2);
  fixtures::annotate_uniform(d);
  ExpectedCostFramework fw;
  auto res = compute_mop(d, fw, false);
  CHECK(ecv(res.value) == ECPair{Rat(1), Rat(1), false});
}
