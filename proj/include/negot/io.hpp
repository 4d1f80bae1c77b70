#ifndef NEGOT_IO_HPP
#define NEGOT_IO_HPP

#include <stdexcept>

#include "negot/diagram.hpp"
#include "negot/engine.hpp"

namespace negot {

struct ParseError : std::runtime_error {
  int line = 0;
  int col = 0;
  ParseError(const std::string& what, int l, int c)
      : std::runtime_error("line " + std::to_string(l) + ", col " +
                           std::to_string(c) + ": " + what),
        line(l), col(c) {}
};

// Text format:
//   negotiation NAME {
//     processes p1 p2;
//     node n0 [p1 p2] init;
//     node n9 [p1 p2] final;
//     outcome n0.go prob=1/2 cost=1 time(p1)=2 { p1 -> n1; p2 -> n2, n3; }
//     analysis meta { key=value; }
//   }
// '#' starts a comment running to the end of the line. Multiple successors
// per process make the diagram nondeterministic; validate() still accepts it.
Diagram parse_diagram(const std::string& text);

// Canonical source: fixed ordering and spacing, parses back to an equal
// diagram.
std::string render_diagram(const Diagram& d);

// GraphViz rendering, byte-stable: nodes as record boxes with one port per
// process, edges labeled with the outcome name. Ordered by node id.
std::string emit_dot(const Diagram& d);
std::string emit_dot(const Subnegotiation& s);
std::string emit_dot(const ReductionTrace& t, int stage);

} // namespace negot

#endif
