#ifndef NEGOT_TEST_FIXTURES_HPP
#define NEGOT_TEST_FIXTURES_HPP

#include "negot/diagram.hpp"

namespace negot::fixtures {

// Attaches unit costs, uniform outcome probabilities and unit per-process
// times to every outcome.
inline void annotate_uniform(Diagram& d) {
  for (auto& nd : d.nodes) {
    Rat p = nd.outs.empty() ? Rat(1) : Rat(1, (int)nd.outs.size());
    for (auto& o : nd.outs) {
      o.prob = p;
      o.cost = Rat(1);
      for (Pid q : nd.dom) o.time[q] = Rat(1);
    }
  }
}

// Two-process request/response protocol with a timeout race and a retry loop.
inline Diagram fig1() {
  DiagramBuilder b("fig1", {"D1", "D2"});
  b.node("n0", {"D1", "D2"}, true);
  b.node("n1", {"D1"});
  b.node("n2", {"D2"});
  b.node("n3", {"D1"});
  b.node("n4", {"D1", "D2"});
  b.node("n5", {"D2"});
  b.node("n6", {"D2"});
  b.node("n7", {"D1", "D2"}, false, true);
  b.outcome("n0", "reg", {{"D1", {"n1"}}, {"D2", {"n2"}}});
  b.outcome("n1", "send", {{"D1", {"n3"}}});
  b.outcome("n2", "eval", {{"D2", {"n4"}}});
  b.outcome("n3", "tout", {{"D1", {"n4"}}});
  b.outcome("n3", "rec", {{"D1", {"n4"}}});
  b.outcome("n4", "npr", {{"D1", {"n7"}}, {"D2", {"n7"}}});
  b.outcome("n4", "pr", {{"D1", {"n7"}}, {"D2", {"n5"}}});
  b.outcome("n5", "done", {{"D2", {"n6"}}});
  b.outcome("n6", "nOK", {{"D2", {"n5"}}});
  b.outcome("n6", "OK", {{"D2", {"n7"}}});
  return b.take();
}

// fig1 without the retry edge: n6 only has the OK outcome.
inline Diagram fig1_acyclic() {
  Diagram d = fig1();
  Nid n6 = d.node_by_name("n6");
  auto& outs = d.nodes[n6].outs;
  outs.erase(outs.begin()); // drop nOK
  return d;
}

// Three-process diagram: p1 runs ahead alone, p2 and p3 iterate a two-level
// loop before rejoining.
inline Diagram fig2() {
  DiagramBuilder b("fig2", {"p1", "p2", "p3"});
  b.node("n0", {"p1", "p2", "p3"}, true);
  b.node("n1", {"p1"});
  b.node("n2", {"p2", "p3"});
  b.node("n3", {"p2"});
  b.node("n4", {"p3"});
  b.node("n5", {"p2"});
  b.node("n6", {"p3"});
  b.node("n7", {"p2", "p3"});
  b.node("n8", {"p1", "p2", "p3"}, false, true);
  b.outcome("n0", "a", {{"p1", {"n1"}}, {"p2", {"n2"}}, {"p3", {"n2"}}});
  b.outcome("n1", "a", {{"p1", {"n8"}}});
  b.outcome("n2", "a", {{"p2", {"n3"}}, {"p3", {"n4"}}});
  b.outcome("n3", "a", {{"p2", {"n7"}}});
  b.outcome("n3", "b", {{"p2", {"n5"}}});
  b.outcome("n4", "a", {{"p3", {"n7"}}});
  b.outcome("n4", "b", {{"p3", {"n6"}}});
  b.outcome("n5", "a", {{"p2", {"n3"}}});
  b.outcome("n6", "a", {{"p3", {"n4"}}});
  b.outcome("n7", "a", {{"p2", {"n8"}}, {"p3", {"n8"}}});
  b.outcome("n7", "b", {{"p2", {"n2"}}, {"p3", {"n2"}}});
  return b.take();
}

// Nondeterministic two-process diagram; the sole outcome of n0 offers each
// process a choice of successors.
inline Diagram fig4() {
  DiagramBuilder b("fig4", {"p1", "p2"});
  b.node("n0", {"p1", "p2"}, true);
  b.node("n1", {"p1"});
  b.node("n2", {"p1", "p2"});
  b.node("n3", {"p2"});
  b.node("n4", {"p1", "p2"}, false, true);
  b.outcome("n0", "a", {{"p1", {"n1", "n2"}}, {"p2", {"n2", "n3"}}});
  b.outcome("n1", "a", {{"p1", {"n4"}}});
  b.outcome("n2", "a", {{"p1", {"n4"}}, {"p2", {"n4"}}});
  b.outcome("n3", "a", {{"p2", {"n4"}}});
  return b.take();
}

} // namespace negot::fixtures

#endif
