#include "negot/invariance.hpp"

namespace negot {

InvarianceVerdict check_invariance(const Diagram& d, const Framework& fw,
                                   InvarianceMode mode, int samples,
                                   std::uint32_t seed) {
  std::vector<Loc> locs = d.locations();
  InvarianceVerdict r;
  std::mt19937 rng(seed);
  std::vector<Framework::Val> vals;
  if (mode == InvarianceMode::Sampled)
    vals = fw.sample_values(d, rng, samples);
  for (std::size_t i = 0; i < locs.size(); ++i)
    for (std::size_t j = i + 1; j < locs.size(); ++j) {
      if (!independent(d, locs[i], locs[j])) continue;
      auto bi = fw.base(d, locs[i]);
      auto bj = fw.base(d, locs[j]);
      auto ij = fw.compose(bi, bj);
      auto ji = fw.compose(bj, bi);
      bool same;
      if (mode == InvarianceMode::Exact) {
        same = fw.equal(ij, ji);
      } else {
        same = true;
        for (const auto& v : vals)
          if (!fw.val_equal(fw.apply(ij, v), fw.apply(ji, v))) {
            same = false;
            break;
          }
      }
      if (!same) {
        r.invariant = false;
        r.witness = {locs[i], locs[j]};
        r.lhs = fw.show_xf(ij);
        r.rhs = fw.show_xf(ji);
        return r;
      }
    }
  return r;
}

} // namespace negot
