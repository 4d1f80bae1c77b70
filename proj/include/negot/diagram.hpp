#ifndef NEGOT_DIAGRAM_HPP
#define NEGOT_DIAGRAM_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "negot/rational.hpp"

namespace negot {

using Pid = int; // index into Diagram::procs
using Nid = int; // index into Diagram::nodes

struct Loc {
  Nid node = -1;
  int out = -1; // index into the node's outcome list
  auto operator<=>(const Loc&) const = default;
};

struct Outcome {
  std::string name;
  std::optional<Rat> prob;
  std::optional<Rat> cost;
  std::map<Pid, Rat> time;
  // One entry per process in the owning node's domain. Successor lists are
  // kept sorted; size one for deterministic diagrams.
  std::map<Pid, std::vector<Nid>> moves;
};

struct NodeDef {
  std::string name;
  std::vector<Pid> dom; // sorted
  std::uint64_t dom_mask = 0;
  std::vector<Outcome> outs;
};

struct AnalysisBlock {
  std::string name;
  std::map<std::string, std::string> entries;
};

struct Diagram {
  std::string name;
  std::vector<std::string> procs;
  std::vector<NodeDef> nodes;
  Nid init = -1;
  Nid fin = -1;
  std::vector<AnalysisBlock> analyses;

  int nprocs() const { return static_cast<int>(procs.size()); }
  int nnodes() const { return static_cast<int>(nodes.size()); }
  const Outcome& at(Loc l) const { return nodes[l.node].outs[l.out]; }
  std::uint64_t dom_mask(Nid n) const { return nodes[n].dom_mask; }
  std::uint64_t all_procs_mask() const {
    return nprocs() == 64 ? ~0ull : ((1ull << nprocs()) - 1);
  }
  Nid node_by_name(std::string_view s) const;
  Pid proc_by_name(std::string_view s) const;
  int outcome_by_name(Nid n, std::string_view s) const;
  std::optional<Loc> loc_by_name(std::string_view s) const; // "node.outcome"
  std::string loc_name(Loc l) const {
    return nodes[l.node].name + "." + nodes[l.node].outs[l.out].name;
  }
  std::vector<Loc> locations() const; // declaration order
};

// Builder helper used by fixtures, the generator and the parser.
struct DiagramBuilder {
  Diagram d;
  explicit DiagramBuilder(std::string name, std::vector<std::string> procs);
  Nid node(const std::string& name, std::initializer_list<std::string> dom,
           bool is_init = false, bool is_final = false);
  Nid node(const std::string& name, const std::vector<std::string>& dom,
           bool is_init = false, bool is_final = false);
  // moves: one (process, successor-node-names) pair per domain process
  void outcome(const std::string& node, const std::string& name,
               const std::vector<std::pair<std::string, std::vector<std::string>>>& moves,
               std::optional<Rat> prob = std::nullopt,
               std::optional<Rat> cost = std::nullopt,
               std::map<std::string, Rat> time = {});
  Diagram take();
};

struct Violation {
  std::string code;   // MissingDelta, DomainViolation, BadInitFin, ProbSumViolation
  std::string detail;
};

std::vector<Violation> validate(const Diagram& d);

struct DetVerdict {
  bool deterministic = true;
  struct Witness { Nid node; int out; Pid proc; };
  std::vector<Witness> witnesses;
};

DetVerdict is_deterministic(const Diagram& d);

// Full-scope configuration; set-valued per process to cover nondeterministic
// diagrams. Deterministic semantics keeps every set a singleton.
struct Config {
  std::vector<std::vector<Nid>> at; // sorted
  bool operator==(const Config&) const = default;
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const;
};

Config initial_config(const Diagram& d);
Config final_config(const Diagram& d);

struct EnabledSet {
  std::vector<Nid> active;   // enabled nodes with at least one outcome
  std::vector<Nid> terminal; // enabled nodes with no outcome (the final node)
};

bool node_enabled(const Diagram& d, const Config& c, Nid n);
EnabledSet enabled(const Diagram& d, const Config& c);

std::optional<Config> step(const Diagram& d, const Config& c, Loc l);

struct ReplayResult {
  bool ok = true;
  int fail_index = -1; // index of the first non-enabled location
  Config end;
};

ReplayResult replay(const Diagram& d, Config start, std::span<const Loc> w);

bool independent(const Diagram& d, Loc a, Loc b);

// Lexicographically least linearization of the dependence order, under the
// (node index, outcome index) location order.
std::vector<Loc> trace_normal_form(const Diagram& d, std::span<const Loc> w);
bool mazurkiewicz_equivalent(const Diagram& d, std::span<const Loc> w,
                             std::span<const Loc> v);

struct LocalEdge {
  Nid from;
  int out;
  Pid proc;
  Nid to;
};

struct LocalGraph {
  std::vector<LocalEdge> edges;
  std::vector<std::vector<int>> succ; // node -> edge indices
  std::vector<char> reachable;        // from init
  bool acyclic = true;
};

LocalGraph local_graph(const Diagram& d);

enum class DomOrder { Less, Equal, Greater, Incomparable };
DomOrder domain_order(const Diagram& d, Nid a, Nid b);

} // namespace negot

#endif
