#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "negot/decompose.hpp"

using namespace negot;

namespace {

Config conf(const Diagram& d, const std::vector<const char*>& nodes) {
  Config c;
  for (const char* n : nodes) c.at.push_back({d.node_by_name(n)});
  return c;
}

std::uint64_t mask(const Diagram& d, const std::vector<const char*>& procs) {
  std::uint64_t m = 0;
  for (const char* p : procs) m |= 1ull << d.proc_by_name(p);
  return m;
}

} // namespace

TEST_CASE("initial configurations") {
  Diagram d2 = fixtures::fig2();
  CHECK(initial_config_of_node(d2, d2.node_by_name("n0")) == initial_config(d2));
  CHECK(initial_config_of_node(d2, d2.node_by_name("n1")) ==
        conf(d2, {"n1", "n8", "n8"}));
  CHECK(initial_config_of_node(d2, d2.node_by_name("n2")) ==
        conf(d2, {"n8", "n2", "n2"}));
  CHECK(initial_config_of_node(d2, d2.node_by_name("n7")) ==
        conf(d2, {"n8", "n7", "n7"}));
  CHECK(initial_config_of_node(d2, d2.node_by_name("n3")) ==
        conf(d2, {"n8", "n3", "n7"}));

  Diagram d1 = fixtures::fig1();
  CHECK(initial_config_of_node(d1, d1.node_by_name("n4")) ==
        conf(d1, {"n4", "n4"}));
  CHECK(initial_config_of_node(d1, d1.node_by_name("n5")) ==
        conf(d1, {"n7", "n5"}));
  // the enabling process may rest at a node that is not co-enabled
  CHECK(initial_config_of_node(d1, d1.node_by_name("n2")) ==
        conf(d1, {"n4", "n2"}));

  // D2 must already be past eval before n1 is the only enabled node
  CHECK(initial_config_of_node(d1, d1.node_by_name("n1")) ==
        conf(d1, {"n1", "n4"}));
}

TEST_CASE("final configurations of nodes") {
  Diagram d2 = fixtures::fig2();
  Config f = final_config(d2);
  CHECK(final_config_of_node(d2, d2.node_by_name("n0")) == f);
  CHECK(final_config_of_node(d2, d2.node_by_name("n1")) == f);
  CHECK(final_config_of_node(d2, d2.node_by_name("n2")) == f);
  CHECK(final_config_of_node(d2, d2.node_by_name("n7")) == f);
  CHECK(final_config_of_node(d2, d2.node_by_name("n3")) ==
        conf(d2, {"n8", "n7", "n7"}));

  Diagram d1 = fixtures::fig1();
  CHECK(final_config_of_node(d1, d1.node_by_name("n4")) ==
        conf(d1, {"n7", "n7"}));
  CHECK(final_config_of_node(d1, d1.node_by_name("n5")) ==
        conf(d1, {"n7", "n7"}));
  CHECK(final_config_of_node(d1, d1.node_by_name("n2")) ==
        conf(d1, {"n4", "n4"}));
}

TEST_CASE("final configurations of locations") {
  Diagram d2 = fixtures::fig2();
  // firing (n7,a) sends both processes straight to n8 and nothing with a
  // strictly smaller domain fires afterwards
  CHECK(final_config_of_location(d2, *d2.loc_by_name("n7.a")) ==
        final_config(d2));
  CHECK(final_config_of_location(d2, *d2.loc_by_name("n3.a")) ==
        conf(d2, {"n8", "n7", "n7"}));
  CHECK(final_config_of_location(d2, *d2.loc_by_name("n4.a")) ==
        conf(d2, {"n8", "n7", "n7"}));
  CHECK(final_config_of_location(d2, *d2.loc_by_name("n7.b")) ==
        conf(d2, {"n8", "n2", "n2"}));
  CHECK(final_config_of_location(d2, *d2.loc_by_name("n2.a")) ==
        conf(d2, {"n8", "n7", "n7"}));

  Diagram d1 = fixtures::fig1();
  CHECK(final_config_of_location(d1, *d1.loc_by_name("n4.pr")) ==
        conf(d1, {"n7", "n7"}));
  CHECK(final_config_of_location(d1, *d1.loc_by_name("n4.npr")) ==
        conf(d1, {"n7", "n7"}));
  CHECK(final_config_of_location(d1, *d1.loc_by_name("n0.reg")) ==
        conf(d1, {"n4", "n4"}));
}

TEST_CASE("subnegotiation of the initial node covers the whole diagram") {
  Diagram d2 = fixtures::fig2();
  auto s = subnegotiation_of_node(d2, d2.node_by_name("n0"));
  CHECK(s.d.nnodes() == 9); // n0..n7 plus the fresh final node
  CHECK(s.d.node_by_name("n8") == -1);
  CHECK(s.d.nodes[s.d.init].name == "n0");
  CHECK(s.orig_node[s.d.fin] == -1);
  CHECK(s.orig_proc == std::vector<Pid>{0, 1, 2});
  CHECK(validate(s.d).empty());
  CHECK(check_soundness(s.d).status == SoundStatus::Sound);
  CHECK(classify(s) == SubnegKind::General);
}

TEST_CASE("replication subnegotiation") {
  Diagram d2 = fixtures::fig2();
  auto s = subnegotiation_of_node(d2, d2.node_by_name("n3"));
  REQUIRE(s.d.nnodes() == 3); // n3, n5, fresh final
  CHECK(s.d.procs == std::vector<std::string>{"p2"});
  CHECK(validate(s.d).empty());
  CHECK(check_soundness(s.d).status == SoundStatus::Sound);
  CHECK(classify(s) == SubnegKind::Replication);
  // n3.a exits: its target equals the endpoint for p2
  Nid n3 = s.d.node_by_name("n3");
  CHECK(s.d.nodes[n3].outs[0].moves.at(0) == std::vector<Nid>{s.d.fin});
  CHECK(s.d.nodes[n3].outs[1].moves.at(0) ==
        std::vector<Nid>{s.d.node_by_name("n5")});
}

TEST_CASE("location subnegotiation keeps one pivot outcome") {
  Diagram d2 = fixtures::fig2();
  auto s = subnegotiation_of_location(d2, *d2.loc_by_name("n2.a"));
  CHECK(s.d.nnodes() == 6); // n2, n3, n4, n5, n6, fresh final
  Nid piv = s.d.init;
  REQUIRE(s.d.nodes[piv].outs.size() == 1);
  CHECK(s.d.nodes[piv].outs[0].name == "a");
  CHECK(validate(s.d).empty());
  CHECK(check_soundness(s.d).status == SoundStatus::Sound);
  CHECK(classify(s) == SubnegKind::General);
}

TEST_CASE("one-trace subnegotiations") {
  Diagram d2 = fixtures::fig2();
  auto sa = subnegotiation_of_location(d2, *d2.loc_by_name("n7.a"));
  CHECK(sa.d.nnodes() == 2);
  CHECK(classify(sa) == SubnegKind::OneTrace);
  auto sb = subnegotiation_of_location(d2, *d2.loc_by_name("n7.b"));
  CHECK(sb.d.nnodes() == 2); // both processes exit straight to the endpoint
  CHECK(classify(sb) == SubnegKind::OneTrace);

  auto s3 = subnegotiation_of_location(d2, *d2.loc_by_name("n3.a"));
  CHECK(s3.d.nnodes() == 2); // n3 with outcome a only, fresh final
  CHECK(classify(s3) == SubnegKind::OneTrace);

  Diagram d1 = fixtures::fig1_acyclic();
  auto s5 = subnegotiation_of_node(d1, d1.node_by_name("n5"));
  CHECK(s5.d.nnodes() == 3); // n5, n6, fresh final
  CHECK(classify(s5) == SubnegKind::OneTrace);
}

TEST_CASE("single-step and whole-diagram subnegotiations") {
  Diagram d2 = fixtures::fig2();
  auto s1 = subnegotiation_of_node(d2, d2.node_by_name("n1"));
  CHECK(s1.d.nnodes() == 2); // n1 straight to the fresh final
  CHECK(s1.d.procs == std::vector<std::string>{"p1"});
  auto s0 = subnegotiation_of_location(d2, *d2.loc_by_name("n0.a"));
  CHECK(s0.d.nnodes() == 9); // n0 (a only), n1..n7, fresh final
  REQUIRE(s0.d.nodes[s0.d.init].outs.size() == 1);
  CHECK(check_soundness(s0.d).status == SoundStatus::Sound);
}

TEST_CASE("non-confluent restricted exploration is detected") {
  DiagramBuilder b("fork", {"A", "B"});
  b.node("n0", {"A", "B"}, true);
  b.node("na", {"A"});
  b.node("nw", {"A", "B"});
  b.node("m1", {"A", "B"});
  b.node("m2", {"A", "B"});
  b.node("nf", {"A", "B"}, false, true);
  b.outcome("n0", "x", {{"A", {"na"}}, {"B", {"nw"}}});
  b.outcome("na", "a1", {{"A", {"m1"}}});
  b.outcome("na", "a2", {{"A", {"m2"}}});
  b.outcome("nw", "w", {{"A", {"nf"}}, {"B", {"nf"}}});
  b.outcome("m1", "go", {{"A", {"nf"}}, {"B", {"nf"}}});
  b.outcome("m2", "go", {{"A", {"nf"}}, {"B", {"nf"}}});
  Diagram d = b.take();
  CHECK_THROWS_WITH_AS(final_config_of_location(d, *d.loc_by_name("n0.x")),
                       doctest::Contains("NonConfluent"), DecomposeError);
}

TEST_CASE("restrict_config freezes out-of-scope processes") {
  Diagram d2 = fixtures::fig2();
  auto pc = restrict_config(conf(d2, {"n8", "n3", "n7"}), mask(d2, {"p2", "p3"}));
  CHECK(pc.at ==
        std::vector<Nid>{-1, d2.node_by_name("n3"), d2.node_by_name("n7")});
}

TEST_CASE("saturation fires single-outcome nodes in node-id order") {
  DiagramBuilder b("chain", {"A", "B"});
  b.node("n0", {"A", "B"}, true);
  b.node("na", {"A"});
  b.node("nb", {"B"});
  b.node("nj", {"A", "B"});
  b.node("nf", {"A", "B"}, false, true);
  b.outcome("n0", "s", {{"A", {"na"}}, {"B", {"nb"}}});
  b.outcome("na", "a", {{"A", {"nj"}}});
  b.outcome("nb", "b", {{"B", {"nj"}}});
  b.outcome("nj", "j", {{"A", {"nf"}}, {"B", {"nf"}}});
  Diagram d = b.take();
  std::uint64_t all = d.all_procs_mask();

  auto r = saturate(d, restrict_config(initial_config(d), all), all, false);
  REQUIRE(r.fired.size() == 4);
  CHECK(r.fired[0].node == d.node_by_name("n0"));
  CHECK(r.fired[1].node == d.node_by_name("na"));
  CHECK(r.fired[2].node == d.node_by_name("nb"));
  CHECK(r.fired[3].node == d.node_by_name("nj"));
  CHECK(r.end.at == std::vector<Nid>(2, d.node_by_name("nf")));

  // strict saturation never fires nodes whose domain equals the scope
  auto rs = saturate(d, restrict_config(initial_config(d), all), all, true);
  CHECK(rs.fired.empty());

  // scope-restricted saturation stops at the join
  PartialConfig pa;
  pa.scope = mask(d, {"A"});
  pa.at = {d.node_by_name("na"), -1};
  auto ra = saturate(d, pa, pa.scope, false);
  REQUIRE(ra.fired.size() == 1);
  CHECK(ra.fired[0].node == d.node_by_name("na"));
  CHECK(ra.end.at[0] == d.node_by_name("nj"));
}

TEST_CASE("saturation rejects multi-outcome and repeating nodes") {
  Diagram d2 = fixtures::fig2();
  PartialConfig pc;
  pc.scope = mask(d2, {"p2"});
  pc.at = {-1, d2.node_by_name("n3"), -1};
  CHECK_THROWS_AS(saturate(d2, pc, pc.scope, false), DecomposeError);

  DiagramBuilder b("loop", {"A", "B"});
  b.node("n0", {"A", "B"}, true);
  b.node("nc", {"A"});
  b.node("nw", {"A", "B"});
  b.node("nf", {"A", "B"}, false, true);
  b.outcome("n0", "s", {{"A", {"nc"}}, {"B", {"nw"}}});
  b.outcome("nc", "c", {{"A", {"nc"}}});
  b.outcome("nw", "w", {{"A", {"nf"}}, {"B", {"nf"}}});
  Diagram d = b.take();
  PartialConfig pl;
  pl.scope = mask(d, {"A"});
  pl.at = {d.node_by_name("nc"), -1};
  CHECK_THROWS_WITH_AS(saturate(d, pl, pl.scope, false),
                       doctest::Contains("RepeatFiring"), DecomposeError);
}
