#ifndef NEGOT_ORACLE_HPP
#define NEGOT_ORACLE_HPP

#include <functional>
#include <stdexcept>

#include "negot/framework.hpp"
#include "negot/soundness.hpp"

namespace negot {

struct OracleError : std::runtime_error {
  std::string code; // GenerationFailed, Diverged
  OracleError(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

// Memoryless scheduler: at every configuration it fires the enabled node
// with the smallest rank. rank is a permutation of the node ids.
struct PriorityScheduler {
  std::vector<int> rank; // node id -> rank; lower fires first
  Nid pick(const std::vector<Nid>& active) const;
};

PriorityScheduler scheduler_by_id(const Diagram& d);
PriorityScheduler scheduler_reversed(const Diagram& d);
PriorityScheduler scheduler_shuffled(const Diagram& d, unsigned seed);
// Named nodes get the highest ranks in the given order; the remaining nodes
// follow in id order.
PriorityScheduler scheduler_prefer(const Diagram& d,
                                   const std::vector<std::string>& names);

struct RunSet {
  std::vector<std::vector<Loc>> runs; // successful runs only
  bool truncated = false;             // a cap cut the enumeration short
};

// All scheduler-compatible successful runs of length <= max_len (default
// 4 * |locations|). Complete when the diagram is acyclic and the bound is
// large enough; `truncated` is set whenever a cap was hit while a run could
// still have been extended.
RunSet enumerate_runs(const Diagram& d, const PriorityScheduler& s,
                      int max_len = -1, std::size_t max_count = 100000);

// Same, without a scheduler: every enabled node may fire.
RunSet enumerate_all_runs(const Diagram& d, int max_len = -1,
                          std::size_t max_count = 100000);

using BaseFn = std::function<std::any(const Diagram&, Loc)>;

// Reference MOP: value-level fixed point over the scheduler-restricted
// configuration graph, seeded with iota at the initial configuration.
// Deliberately shares no traversal or solver plumbing with the engine.
std::any brute_mop(const Diagram& d, const Framework& fw,
                   const PriorityScheduler& s, BaseFn base_fn = {},
                   std::size_t max_configs = kDefaultMaxConfigs);

enum class RunQueryKind { E1, E2, E3, E4, Star };

// Word-level anti-pattern query over successful runs.
//   E1:   some run contains g (no kill after it) followed by focus
//   E2:   some run reaches focus without a live gen (kill or nothing since
//         the last gen)
//   E3:   some run contains focus followed kill-free by a gen
//   E4:   some run continues from focus without meeting a gen before a kill
//         or the end
//   Star: some run has positions i, j with run[i] = focus, run[j] = focus2,
//         no kill causally between them, and j not below i in the trace
//         order of the run
struct RunLanguageQuery {
  RunQueryKind kind = RunQueryKind::E1;
  std::vector<Loc> gens;
  std::vector<Loc> kills;
  Loc focus{};
  Loc focus2{}; // Star only
};

struct RegexVerdict {
  bool holds = false;
  bool truncated = false;
  std::vector<Loc> witness;
};

// E1-E4 scan the raw words of all successful runs (the scheduler is ignored
// for them: membership is not closed under equivalent reshuffling). Star is
// a trace property, so scheduler-compatible runs suffice.
RegexVerdict regex_holds(const Diagram& d, const RunLanguageQuery& q,
                         const PriorityScheduler& s, int max_len = -1,
                         std::size_t max_count = 100000);

// Trace order over run positions: reflexive-transitive closure of
// "i <= j and run[i], run[j] share a process". before[j*n + i] == 1 iff
// i is below j.
std::vector<char> trace_order(const Diagram& d, const std::vector<Loc>& run);

struct GenStats {
  int attempted = 0; // random candidates drawn
  int accepted = 0;  // random candidates that passed all checks
};

// Deterministic sound diagram from soundness-preserving combinators
// (sequence, exclusive choice with re-merge, guarded loop, parallel
// split/join over disjoint process sets). A slice of the seeds instead
// rejection-samples unconstrained random diagrams through check_soundness;
// stats records that funnel. The construction mode lands in an analysis
// block named "provenance".
Diagram generate_sound_diagram(unsigned seed, int nprocs, int max_nodes,
                               GenStats* stats = nullptr);

} // namespace negot

#endif
