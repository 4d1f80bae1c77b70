#ifndef NEGOT_MAX_PLUS_HPP
#define NEGOT_MAX_PLUS_HPP

#include "negot/framework.hpp"

namespace negot {

// Extended rational: -inf is the max-plus zero (no path), +inf marks
// divergence through a positive cycle.
struct MPNum {
  int kind = -1; // -1: -inf, 0: finite, +1: +inf
  Rat v;
  bool operator==(const MPNum&) const = default;
  static MPNum ninf() { return {-1, Rat(0)}; }
  static MPNum pinf() { return {+1, Rat(0)}; }
  static MPNum fin(Rat r) { return {0, std::move(r)}; }
};

MPNum mp_add(const MPNum& a, const MPNum& b); // -inf absorbs
MPNum mp_max(const MPNum& a, const MPNum& b);
bool mp_less(const MPNum& a, const MPNum& b);
std::string show_mp(const MPNum& a);

// Square matrix over processes, row-major. apply: y(p) = max_q A(p,q)+x(q).
struct MPMat {
  int n = 0;
  std::vector<MPNum> a;
  MPNum& at(int r, int c) { return a[r * n + c]; }
  const MPNum& at(int r, int c) const { return a[r * n + c]; }
  bool operator==(const MPMat&) const = default;
  static MPMat ident(int n);
  static MPMat zero(int n); // all -inf
};

using MPVec = std::vector<MPNum>;

class MaxPlusFramework final : public Framework {
public:
  explicit MaxPlusFramework(int nprocs) : n_(nprocs) {}

  std::string name() const override { return "worst-case-time"; }

  Val iota() const override; // zero vector: all processes start at time 0
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

  // Kleene iteration; entries still growing past the acyclic bound become
  // +inf (positive cycle).
  Xf flow_solve(const FlowGraph& g) const override;
  std::vector<Val> value_fixpoint(const ValueGraph& g) const override;

  std::vector<Val> sample_values(const Diagram& d, std::mt19937& rng,
                                 int count) const override;

  static const MPMat& get(const std::any& a) {
    return std::any_cast<const MPMat&>(a);
  }

private:
  int n_;
};

// Largest entry of a value vector (-inf for the empty vector).
MPNum makespan(const MPVec& v);
std::string show_mp_vec(const MPVec& v);

} // namespace negot

#endif
