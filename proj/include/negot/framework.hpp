#ifndef NEGOT_FRAMEWORK_HPP
#define NEGOT_FRAMEWORK_HPP

#include <any>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "negot/diagram.hpp"

namespace negot {

struct FrameworkError : std::runtime_error {
  std::string code; // MissingAnnotation, Diverged, Unsupported
  FrameworkError(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

// Single-entry single-exit graph whose edges carry transformers. flow_solve
// returns the join over all entry-to-exit paths of the path compositions.
struct FlowGraph {
  struct Edge {
    int from;
    int to;
    std::any xf;
  };
  int nverts = 0;
  int entry = 0;
  int exit = 0;
  std::vector<Edge> edges;
};

// Rooted graph for forward value propagation (oracle side).
struct ValueGraph {
  struct Edge {
    int from;
    int to;
    std::any xf;
  };
  int nverts = 0;
  int root = 0;
  std::vector<Edge> edges;
};

// Dataflow framework over an abstract transformer monoid with join. Values
// and transformers are type-erased; each implementation downcasts its own.
class Framework {
public:
  using Val = std::any;
  using Xf = std::any;

  virtual ~Framework() = default;
  virtual std::string name() const = 0;

  virtual Val iota() const = 0;   // initial value
  virtual Val bottom() const = 0; // join identity
  virtual Val join_val(const Val&, const Val&) const = 0;
  virtual bool val_equal(const Val&, const Val&) const = 0;
  virtual Val apply(const Xf&, const Val&) const = 0;
  virtual std::string show_val(const Val&) const = 0;

  virtual Xf identity() const = 0;
  virtual Xf base(const Diagram& d, Loc l) const = 0;
  // compose(first, then): run `first`, then `then`
  virtual Xf compose(const Xf& first, const Xf& then) const = 0;
  virtual Xf join(const Xf&, const Xf&) const = 0;
  virtual bool equal(const Xf&, const Xf&) const = 0;
  virtual std::string show_xf(const Xf&) const = 0;

  // Default: Kleene iteration on transformers-to-exit; suits finite-height
  // frameworks. Unbounded domains must override with a closed-form solver.
  virtual Xf flow_solve(const FlowGraph& g) const;

  // Forward MOP value per vertex (root seeded with iota). Default: worklist
  // iteration to a fixpoint; same finiteness caveat as flow_solve.
  virtual std::vector<Val> value_fixpoint(const ValueGraph& g) const;

  // Random values for sampled commutation checks.
  virtual std::vector<Val> sample_values(const Diagram& d, std::mt19937& rng,
                                         int count) const;

protected:
  static constexpr int kIterationCap = 200000;
};

} // namespace negot

#endif
