#ifndef NEGOT_DECOMPOSE_HPP
#define NEGOT_DECOMPOSE_HPP

#include <stdexcept>

#include "negot/soundness.hpp"

namespace negot {

struct DecomposeError : std::runtime_error {
  std::string code; // NotFound, NotUnique, NonConfluent, StepLimit,
                    // RepeatFiring, LimitExceeded
  DecomposeError(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

// Configuration over a process subset; at[p] == -1 for frozen processes.
// Deterministic semantics only.
struct PartialConfig {
  std::uint64_t scope = 0;
  std::vector<Nid> at;
  bool operator==(const PartialConfig&) const = default;
};

PartialConfig restrict_config(const Config& c, std::uint64_t scope);

// The unique reachable configuration enabling m and no other active node.
Config initial_config_of_node(const Diagram& d, Nid m,
                              std::size_t max_configs = kDefaultMaxConfigs);

// Endpoint of maximal dom(m)-internal execution from I(m). Explores every
// firing order and asserts the terminal configuration is unique.
Config final_config_of_node(const Diagram& d, Nid m,
                            std::size_t max_configs = kDefaultMaxConfigs);

// Endpoint after firing l = (m,a) from I(m) and then only nodes with domain
// strictly inside dom(m).
Config final_config_of_location(const Diagram& d, Loc l,
                                std::size_t max_configs = kDefaultMaxConfigs);

struct Subnegotiation {
  Diagram d;                  // init = pivot, fin = fresh final node
  std::vector<Nid> orig_node; // sub node index -> original node (-1 for fin)
  std::vector<Pid> orig_proc; // sub process index -> original process
  Nid pivot = -1;             // original id of the initial node
};

Subnegotiation subnegotiation_of_node(const Diagram& d, Nid n,
                                      std::size_t max_configs = kDefaultMaxConfigs);
Subnegotiation subnegotiation_of_location(const Diagram& d, Loc l,
                                          std::size_t max_configs = kDefaultMaxConfigs);

struct SaturateResult {
  PartialConfig end;
  std::vector<Loc> fired;
};

// Fires the unique outcome of enabled single-outcome nodes with domain inside
// X (strictly inside when strict) until none remains. Every node may fire at
// most once; a repeat firing certifies a broken precondition.
SaturateResult saturate(const Diagram& d, PartialConfig start, std::uint64_t X,
                        bool strict);

enum class SubnegKind { OneTrace, Replication, General };
SubnegKind classify(const Subnegotiation& s);

} // namespace negot

#endif
