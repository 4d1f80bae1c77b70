#ifndef NEGOT_EXPECTED_COST_HPP
#define NEGOT_EXPECTED_COST_HPP

#include "negot/framework.hpp"

namespace negot {

// Probability mass together with the conditional expected cost accumulated
// on the way. Transformers and values share the representation. `infinite`
// marks a diverging expectation (probability-1 cycle).
struct ECPair {
  Rat mass;
  Rat cost;
  bool infinite = false;
  bool operator==(const ECPair&) const = default;
};

class ExpectedCostFramework final : public Framework {
public:
  std::string name() const override { return "expected-cost"; }

  Val iota() const override;
  Val bottom() const override;
  Val join_val(const Val&, const Val&) const override;
  bool val_equal(const Val&, const Val&) const override;
  Val apply(const Xf&, const Val&) const override;
  std::string show_val(const Val&) const override;

  Xf identity() const override;
  Xf base(const Diagram& d, Loc l) const override;
  Xf compose(const Xf&, const Xf&) const override;
  Xf join(const Xf&, const Xf&) const override;
  bool equal(const Xf&, const Xf&) const override;
  std::string show_xf(const Xf&) const override;

  // Exact rational solution of the absorption system
  //   M(v) = sum_e m_e M(target),  U(v) = sum_e m_e (c_e M(target) + U(target))
  // with M(exit) = 1, U(exit) = 0.
  Xf flow_solve(const FlowGraph& g) const override;

  // Forward linear system over the rooted graph; exact.
  std::vector<Val> value_fixpoint(const ValueGraph& g) const override;

  std::vector<Val> sample_values(const Diagram& d, std::mt19937& rng,
                                 int count) const override;

  static const ECPair& get(const std::any& a) {
    return std::any_cast<const ECPair&>(a);
  }
};

std::string show_ec(const ECPair& p);

} // namespace negot

#endif
