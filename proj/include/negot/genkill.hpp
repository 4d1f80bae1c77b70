#ifndef NEGOT_GENKILL_HPP
#define NEGOT_GENKILL_HPP

#include <array>

#include "negot/framework.hpp"

namespace negot {

// Anti-pattern specification over locations. The framework tracks, per run,
// one (S, D) pair for every live gen occurrence: S is the set of processes
// the occurrence has causally reached, D ⊆ S the processes whose reaching
// interval passed a kill. A target with D ∩ dom = ∅ reports detection;
// endpoints of the interval are excluded (open-interval semantics).
struct GKSpec {
  std::vector<Loc> gens;
  std::vector<Loc> kills;
  std::vector<Loc> targets;
  bool virtual_start = false; // seed iota with a clean all-process pair
  bool detect_at_end = false; // a clean pair surviving to the end detects
};

// One path behavior. Gen pairs are encoded base 3 per process:
// 0 = outside S, 1 = in S \ D, 2 = in D. Target occurrences are tracked
// symmetrically by their causal-future process set (a plain bitmask): a gen
// fired later but causally unordered with a target can be linearized
// directly in front of it, so it triggers on any disjoint target mask.
struct GKBranch {
  bool top = false;          // detection triggered on this path
  std::vector<char> trig;    // input gen pair -> triggers detection
  std::vector<int> u;        // input gen pair -> updated pair
  std::vector<int> fresh;    // gen pairs created on this path, sorted
  std::vector<char> gtrig;   // input target mask -> a later gen triggers
  std::vector<int> tu;       // input target mask -> updated mask
  std::vector<int> tfresh;   // target masks created on this path, sorted
  bool operator==(const GKBranch&) const = default;
  bool operator<(const GKBranch&) const;
};

struct GKXf {
  std::vector<GKBranch> branches; // sorted, unique
  bool operator==(const GKXf&) const = default;
};

// Per-run abstract state: live gen pairs plus target-occurrence masks.
struct GKAlpha {
  std::vector<int> pairs;  // sorted, unique
  std::vector<int> tmasks; // sorted, unique
  bool operator==(const GKAlpha&) const = default;
  auto operator<=>(const GKAlpha&) const = default;
};

// Set of per-run abstract states.
struct GKVal {
  bool top = false;
  std::vector<GKAlpha> alphas; // sorted, unique
  bool operator==(const GKVal&) const = default;
};

class GenKillFramework final : public Framework {
public:
  GenKillFramework(const Diagram& d, GKSpec spec);

  std::string name() const override { return "genkill"; }

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

  std::vector<Val> sample_values(const Diagram& d, std::mt19937& rng,
                                 int count) const override;

  bool detects(const Val& v) const;

  // Applies one location to a concrete abstract state; also the reference
  // run-level semantics used by the oracle.
  GKVal step_val(const Diagram& d, Loc l, const GKVal& v) const;

  int pair_count() const { return p3_; }
  std::uint64_t pair_smask(int pair) const { return smask_[pair]; }
  std::uint64_t pair_dmask(int pair) const { return dmask_[pair]; }
  int encode_pair(std::uint64_t s, std::uint64_t dset) const;

  const GKSpec& spec() const { return spec_; }

private:
  GKBranch base_branch(const Diagram& d, Loc l) const;
  bool in(const std::vector<Loc>& s, Loc l) const;

  GKSpec spec_;
  int nprocs_;
  int p3_; // 3^nprocs, gen pair space
  int p2_; // 2^nprocs, target mask space
  std::vector<std::uint64_t> smask_, dmask_;
};

// Direction/modality of the classical anti-pattern questions, each compiled
// to a GKSpec plus a polarity:
//   MayForward:   some run reaches l from a gen with no kill between
//   MustForward:  every run reaching l passed a gen, kill-free since the
//                 last gen
//   MayBackward:  some run continues from l to a gen with no kill between
//   MustBackward: every continuation from l meets a gen before any kill
enum class GKVariant { MayForward, MustForward, MayBackward, MustBackward };

struct CompiledGK {
  GKSpec spec;
  bool negate = false; // property holds iff NOT detected
};

CompiledGK compile_genkill_variant(const Diagram& d, std::vector<Loc> gens,
                                   std::vector<Loc> kills, Loc focus,
                                   GKVariant variant);

// Textbook three-state gen/kill/target framework: 0 = nothing, 1 = live gen,
// 2 = detected. Deliberately ignores concurrency; not invariant under
// independent swaps, kept as the counterexample framework.
class NaiveGenKillFramework final : public Framework {
public:
  NaiveGenKillFramework(Loc gen, Loc target, std::vector<Loc> kills)
      : gen_(gen), target_(target), kills_(std::move(kills)) {}

  std::string name() const override { return "naive-genkill"; }

  Val iota() const override { return 0; }
  Val bottom() const override { return -1; } // below 0
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

  std::vector<Val> sample_values(const Diagram& d, std::mt19937& rng,
                                 int count) const override;

private:
  // transformer: for each input state, the set of output states (bitmask)
  using Tab = std::array<int, 3>;
  Loc gen_, target_;
  std::vector<Loc> kills_;
};

} // namespace negot

#endif
