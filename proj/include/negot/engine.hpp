#ifndef NEGOT_ENGINE_HPP
#define NEGOT_ENGINE_HPP

#include <map>

#include "negot/decompose.hpp"
#include "negot/framework.hpp"

namespace negot {

struct EngineError : std::runtime_error {
  std::string code; // PreconditionViolated, AlreadyReduced, ExitMismatch,
                    // EngineInvariantBroken, NotSoundEvidence, NotDeterministic
  EngineError(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

// Mutable reduction bookkeeping over a working copy of the diagram. Synthetic
// outcomes carry no annotations; their transformers live in the registry,
// keyed by the (globally unique) outcome name.
struct ReducedState {
  std::vector<char> node_reduced;
  std::vector<char> pruned; // unreachable from init in the working copy
  std::map<std::string, std::any> registry;
};

// Transformer of a location in the working copy: registry entry for synthetic
// outcomes, framework base transformer otherwise.
std::any xf_of(const Diagram& d, const ReducedState& st, const Framework& fw,
               Loc l);

// Recomputes st.pruned from init reachability over all moves.
void refresh_pruned(const Diagram& d, ReducedState& st);

// Number of outcomes of nodes reachable from init.
int reachable_locations(const Diagram& d);

// Syntactic test: single outcome already wired so that no node with a
// (non-strictly) smaller domain can fire after it. Requires every unpruned
// node with a strictly smaller domain to be reduced already.
bool is_reduced_node(const Diagram& d, const ReducedState& st, Nid n);

// base(l) composed with the transformers fired by strict saturation from the
// successors of l; the MOP of the one-trace piece rooted at l.
std::any one_trace_mop(const Diagram& d, const ReducedState& st,
                       const Framework& fw, Loc l);

// Replaces outcome l with a synthetic outcome wired to the saturation
// endpoint and registers its one-trace transformer.
void red_location(Diagram& d, ReducedState& st, const Framework& fw, Loc l);

struct ReplicationResult {
  std::any xf;
  PartialConfig exit;        // common landing configuration of exit edges
  std::vector<Nid> members;  // flow-graph vertices, entry first
};

// Flow graph over the equal-domain nodes reachable from n; every edge leaving
// the class must land on one partial configuration (ExitMismatch otherwise).
ReplicationResult replication_mop(const Diagram& d, const ReducedState& st,
                                  const Framework& fw, Nid n);

// Replaces all outcomes of n with a single synthetic outcome wired to the
// replication exit; prunes nodes that become unreachable.
void red_node(Diagram& d, ReducedState& st, const Framework& fw, Nid n,
              const ReplicationResult* pre = nullptr);

struct ReductionStep {
  enum class Kind { Location, Node };
  Kind kind = Kind::Location;
  std::string pivot;                // location or node name before the step
  std::vector<std::string> members; // nodes the extracted piece consists of
  SubnegKind klass = SubnegKind::OneTrace;
  std::any xf;
  int snapshot = -1; // state after this step
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  std::vector<Diagram> snapshots;                         // [0] = input
  std::vector<std::map<std::string, std::any>> registries; // aligned
  std::vector<int> reachable_locs;                         // aligned
};

struct MopResult {
  std::any xf;    // transformer of the unique outcome of the initial node
  std::any value; // xf applied to the framework's initial value
  ReductionTrace trace;
};

// The reduction loop: repeatedly pick a minimal-domain unreduced node, reduce
// every location of its domain class, then every node of the class, until the
// initial node is reduced. Ties break on the lowest node id; pass a different
// order via stage_reverse to cross-check order independence.
MopResult compute_mop(const Diagram& d, const Framework& fw,
                      bool record_trace = true, bool stage_reverse = false);

} // namespace negot

#endif
