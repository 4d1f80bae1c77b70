#ifndef NEGOT_SOUNDNESS_HPP
#define NEGOT_SOUNDNESS_HPP

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "negot/diagram.hpp"

namespace negot {

inline constexpr std::size_t kDefaultMaxConfigs = 1'000'000;

struct ReachabilityGraph {
  std::vector<Config> verts;
  std::unordered_map<Config, int, ConfigHash> index;
  struct Edge {
    int from;
    Loc loc;
    int to;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> out_edges; // vertex -> edge indices
  int root = 0;
  int fin = -1; // vertex index of the final configuration, -1 if unreached
  bool truncated = false;
  std::size_t limit = 0;
};

ReachabilityGraph reachability_graph(const Diagram& d,
                                     std::size_t max_configs = kDefaultMaxConfigs);

enum class SoundStatus { Sound, Unsound, LimitExceeded };

struct SoundnessVerdict {
  SoundStatus status = SoundStatus::Sound;
  // Unsound: shortest run from the initial configuration to a vertex from
  // which the final configuration is unreachable.
  std::vector<Loc> witness;
};

SoundnessVerdict check_soundness(const Diagram& d,
                                 std::size_t max_configs = kDefaultMaxConfigs);

struct DeadlockReport {
  std::vector<Config> configs;
  bool truncated = false;
};

DeadlockReport deadlocks(const Diagram& d,
                         std::size_t max_configs = kDefaultMaxConfigs);

struct DominationVerdict {
  bool ok = true;
  std::vector<Nid> counterexample; // circuit without a dominant node
};

// Checks every simple circuit of the local graph (restricted to graph-reachable
// nodes) up to max_cycle_len for a node whose domain contains all circuit
// domains.
DominationVerdict check_domination(const Diagram& d, int max_cycle_len = 12);

} // namespace negot

#endif
