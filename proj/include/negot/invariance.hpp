#ifndef NEGOT_INVARIANCE_HPP
#define NEGOT_INVARIANCE_HPP

#include <optional>

#include "negot/framework.hpp"

namespace negot {

struct InvarianceVerdict {
  bool invariant = true;
  std::optional<std::pair<Loc, Loc>> witness; // independent pair that differs
  std::string lhs, rhs;                       // rendered composites
};

enum class InvarianceMode { Exact, Sampled };

// A framework is invariant when base transformers of independent locations
// commute. Exact mode compares composites structurally; sampled mode probes
// them on sample_values (witnessing only, never a proof).
InvarianceVerdict check_invariance(const Diagram& d, const Framework& fw,
                                   InvarianceMode mode = InvarianceMode::Exact,
                                   int samples = 32, std::uint32_t seed = 1);

} // namespace negot

#endif
