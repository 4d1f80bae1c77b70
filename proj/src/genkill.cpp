#include "negot/genkill.hpp"

#include <algorithm>

namespace negot {

bool GKBranch::operator<(const GKBranch& o) const {
  if (top != o.top) return top < o.top;
  if (trig != o.trig) return trig < o.trig;
  if (u != o.u) return u < o.u;
  if (fresh != o.fresh) return fresh < o.fresh;
  if (gtrig != o.gtrig) return gtrig < o.gtrig;
  if (tu != o.tu) return tu < o.tu;
  return tfresh < o.tfresh;
}

namespace {

void canon(std::vector<GKBranch>& bs) {
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
}

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void canon_alphas(std::vector<GKAlpha>& as) {
  for (auto& a : as) {
    sort_unique(a.pairs);
    sort_unique(a.tmasks);
  }
  std::sort(as.begin(), as.end());
  as.erase(std::unique(as.begin(), as.end()), as.end());
}

constexpr std::size_t kBranchCap = 200000;

} // namespace

GenKillFramework::GenKillFramework(const Diagram& d, GKSpec spec)
    : spec_(std::move(spec)), nprocs_(d.nprocs()) {
  if (nprocs_ > 10)
    throw FrameworkError("Unsupported", "genkill limited to 10 processes");
  p3_ = 1;
  for (int i = 0; i < nprocs_; ++i) p3_ *= 3;
  p2_ = 1 << nprocs_;
  smask_.resize(p3_);
  dmask_.resize(p3_);
  for (int i = 0; i < p3_; ++i) {
    int x = i;
    for (int p = 0; p < nprocs_; ++p) {
      int digit = x % 3;
      x /= 3;
      if (digit >= 1) smask_[i] |= 1ull << p;
      if (digit == 2) dmask_[i] |= 1ull << p;
    }
  }
  for (auto* v : {&spec_.gens, &spec_.kills, &spec_.targets}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
}

int GenKillFramework::encode_pair(std::uint64_t s, std::uint64_t dset) const {
  int idx = 0, w = 1;
  for (int p = 0; p < nprocs_; ++p, w *= 3) {
    if (dset & (1ull << p))
      idx += 2 * w;
    else if (s & (1ull << p))
      idx += w;
  }
  return idx;
}

bool GenKillFramework::in(const std::vector<Loc>& s, Loc l) const {
  return std::binary_search(s.begin(), s.end(), l);
}

GKBranch GenKillFramework::base_branch(const Diagram& d, Loc l) const {
  std::uint64_t X = d.dom_mask(l.node);
  bool tgt = in(spec_.targets, l), kill = in(spec_.kills, l),
       gen = in(spec_.gens, l);
  GKBranch b;
  b.trig.assign(p3_, 0);
  b.u.resize(p3_);
  for (int i = 0; i < p3_; ++i) {
    if (tgt && (dmask_[i] & X) == 0) b.trig[i] = 1;
    if (smask_[i] & X) {
      bool dirty = (dmask_[i] & X) != 0 || kill;
      b.u[i] = encode_pair(smask_[i] | X, dirty ? (dmask_[i] | X) : dmask_[i]);
    } else {
      b.u[i] = i;
    }
  }
  b.gtrig.assign(p2_, 0);
  b.tu.resize(p2_);
  for (int t = 0; t < p2_; ++t) {
    if (gen && (t & X) == 0) b.gtrig[t] = 1;
    b.tu[t] = (t & X) ? static_cast<int>(t | X) : t;
  }
  if (gen) b.fresh.push_back(encode_pair(X, 0));
  if (tgt) b.tfresh.push_back(static_cast<int>(X));
  return b;
}

Framework::Val GenKillFramework::iota() const {
  GKVal v;
  GKAlpha a;
  if (spec_.virtual_start)
    a.pairs.push_back(
        encode_pair(nprocs_ == 64 ? ~0ull : (1ull << nprocs_) - 1, 0));
  v.alphas.push_back(std::move(a));
  return v;
}

Framework::Val GenKillFramework::bottom() const { return GKVal{}; }

Framework::Val GenKillFramework::join_val(const Val& a, const Val& b) const {
  const auto& x = std::any_cast<const GKVal&>(a);
  const auto& y = std::any_cast<const GKVal&>(b);
  GKVal r;
  r.top = x.top || y.top;
  r.alphas = x.alphas;
  r.alphas.insert(r.alphas.end(), y.alphas.begin(), y.alphas.end());
  canon_alphas(r.alphas);
  return r;
}

bool GenKillFramework::val_equal(const Val& a, const Val& b) const {
  return std::any_cast<const GKVal&>(a) == std::any_cast<const GKVal&>(b);
}

Framework::Val GenKillFramework::apply(const Xf& f, const Val& v) const {
  const auto& xf = std::any_cast<const GKXf&>(f);
  const auto& val = std::any_cast<const GKVal&>(v);
  GKVal r;
  for (const GKBranch& b : xf.branches) {
    if (val.top) r.top = true;
    for (const auto& alpha : val.alphas) {
      bool hit = b.top;
      for (int p : alpha.pairs)
        if (b.trig[p]) { hit = true; break; }
      if (!hit)
        for (int t : alpha.tmasks)
          if (b.gtrig[t]) { hit = true; break; }
      if (hit) {
        r.top = true;
        continue;
      }
      GKAlpha out;
      out.pairs.reserve(alpha.pairs.size() + b.fresh.size());
      for (int p : alpha.pairs) out.pairs.push_back(b.u[p]);
      out.pairs.insert(out.pairs.end(), b.fresh.begin(), b.fresh.end());
      out.tmasks.reserve(alpha.tmasks.size() + b.tfresh.size());
      for (int t : alpha.tmasks) out.tmasks.push_back(b.tu[t]);
      out.tmasks.insert(out.tmasks.end(), b.tfresh.begin(), b.tfresh.end());
      r.alphas.push_back(std::move(out));
    }
  }
  canon_alphas(r.alphas);
  return r;
}

std::string GenKillFramework::show_val(const Val& v) const {
  const auto& val = std::any_cast<const GKVal&>(v);
  std::string s = "{";
  bool first = true;
  if (val.top) {
    s += "top";
    first = false;
  }
  for (const auto& a : val.alphas) {
    if (!first) s += ", ";
    first = false;
    s += "[";
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
      if (i) s += " ";
      s += std::to_string(a.pairs[i]);
    }
    s += "|";
    for (std::size_t i = 0; i < a.tmasks.size(); ++i) {
      if (i) s += " ";
      s += std::to_string(a.tmasks[i]);
    }
    s += "]";
  }
  return s + "}";
}

Framework::Xf GenKillFramework::identity() const {
  GKBranch b;
  b.trig.assign(p3_, 0);
  b.u.resize(p3_);
  for (int i = 0; i < p3_; ++i) b.u[i] = i;
  b.gtrig.assign(p2_, 0);
  b.tu.resize(p2_);
  for (int t = 0; t < p2_; ++t) b.tu[t] = t;
  return GKXf{{std::move(b)}};
}

Framework::Xf GenKillFramework::base(const Diagram& d, Loc l) const {
  return GKXf{{base_branch(d, l)}};
}

Framework::Xf GenKillFramework::compose(const Xf& a, const Xf& b) const {
  const auto& x = std::any_cast<const GKXf&>(a);
  const auto& y = std::any_cast<const GKXf&>(b);
  if (x.branches.size() * y.branches.size() > kBranchCap)
    throw FrameworkError("Diverged", "genkill branch blow-up");
  GKXf r;
  for (const GKBranch& b1 : x.branches)
    for (const GKBranch& b2 : y.branches) {
      GKBranch c;
      c.top = b1.top || b2.top;
      if (!c.top)
        for (int f : b1.fresh)
          if (b2.trig[f]) { c.top = true; break; }
      if (!c.top)
        for (int tf : b1.tfresh)
          if (b2.gtrig[tf]) { c.top = true; break; }
      c.trig.assign(p3_, 0);
      c.u.resize(p3_);
      for (int i = 0; i < p3_; ++i) {
        c.trig[i] = b1.trig[i] || b2.trig[b1.u[i]];
        c.u[i] = b2.u[b1.u[i]];
      }
      c.gtrig.assign(p2_, 0);
      c.tu.resize(p2_);
      for (int t = 0; t < p2_; ++t) {
        c.gtrig[t] = b1.gtrig[t] || b2.gtrig[b1.tu[t]];
        c.tu[t] = b2.tu[b1.tu[t]];
      }
      c.fresh.reserve(b1.fresh.size() + b2.fresh.size());
      for (int f : b1.fresh) c.fresh.push_back(b2.u[f]);
      c.fresh.insert(c.fresh.end(), b2.fresh.begin(), b2.fresh.end());
      sort_unique(c.fresh);
      c.tfresh.reserve(b1.tfresh.size() + b2.tfresh.size());
      for (int tf : b1.tfresh) c.tfresh.push_back(b2.tu[tf]);
      c.tfresh.insert(c.tfresh.end(), b2.tfresh.begin(), b2.tfresh.end());
      sort_unique(c.tfresh);
      r.branches.push_back(std::move(c));
    }
  canon(r.branches);
  return r;
}

Framework::Xf GenKillFramework::join(const Xf& a, const Xf& b) const {
  const auto& x = std::any_cast<const GKXf&>(a);
  const auto& y = std::any_cast<const GKXf&>(b);
  GKXf r;
  r.branches = x.branches;
  r.branches.insert(r.branches.end(), y.branches.begin(), y.branches.end());
  canon(r.branches);
  if (r.branches.size() > kBranchCap)
    throw FrameworkError("Diverged", "genkill branch blow-up");
  return r;
}

bool GenKillFramework::equal(const Xf& a, const Xf& b) const {
  return std::any_cast<const GKXf&>(a) == std::any_cast<const GKXf&>(b);
}

std::string GenKillFramework::show_xf(const Xf& f) const {
  const auto& xf = std::any_cast<const GKXf&>(f);
  std::string s = "{" + std::to_string(xf.branches.size()) + " branches";
  for (const auto& b : xf.branches) {
    s += "; ";
    if (b.top) s += "top ";
    int trigs = 0, gtrigs = 0;
    for (char t : b.trig) trigs += t;
    for (char t : b.gtrig) gtrigs += t;
    s += "trig:" + std::to_string(trigs) + "/" + std::to_string(gtrigs) +
         " fresh:[";
    for (std::size_t i = 0; i < b.fresh.size(); ++i) {
      if (i) s += " ";
      s += std::to_string(b.fresh[i]);
    }
    s += "|";
    for (std::size_t i = 0; i < b.tfresh.size(); ++i) {
      if (i) s += " ";
      s += std::to_string(b.tfresh[i]);
    }
    s += "]";
  }
  return s + "}";
}

std::vector<Framework::Val>
GenKillFramework::sample_values(const Diagram&, std::mt19937& rng,
                                int count) const {
  std::uniform_int_distribution<int> npairs(0, 3), pair(0, p3_ - 1),
      tmask(0, p2_ - 1);
  std::vector<Val> out;
  out.reserve(count);
  out.push_back(iota());
  while (static_cast<int>(out.size()) < count) {
    GKVal v;
    GKAlpha a;
    int k = npairs(rng);
    for (int i = 0; i < k; ++i) a.pairs.push_back(pair(rng));
    int m = npairs(rng);
    for (int i = 0; i < m; ++i) a.tmasks.push_back(tmask(rng));
    v.alphas.push_back(std::move(a));
    canon_alphas(v.alphas);
    out.push_back(std::move(v));
  }
  return out;
}

bool GenKillFramework::detects(const Val& v) const {
  const auto& val = std::any_cast<const GKVal&>(v);
  if (val.top) return true;
  if (!spec_.detect_at_end) return false;
  for (const auto& a : val.alphas)
    for (int p : a.pairs)
      if (dmask_[p] == 0) return true;
  return false;
}

GKVal GenKillFramework::step_val(const Diagram& d, Loc l, const GKVal& v) const {
  return std::any_cast<GKVal>(apply(base(d, l), v));
}

CompiledGK compile_genkill_variant(const Diagram&, std::vector<Loc> gens,
                                   std::vector<Loc> kills, Loc focus,
                                   GKVariant variant) {
  auto srt = [](std::vector<Loc>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  srt(gens);
  srt(kills);
  std::vector<Loc> kill_not_gen, kill_or_gen;
  std::set_difference(kills.begin(), kills.end(), gens.begin(), gens.end(),
                      std::back_inserter(kill_not_gen));
  std::set_union(kills.begin(), kills.end(), gens.begin(), gens.end(),
                 std::back_inserter(kill_or_gen));
  CompiledGK c;
  switch (variant) {
  case GKVariant::MayForward:
    c.spec.gens = gens;
    c.spec.kills = kills;
    c.spec.targets = {focus};
    break;
  case GKVariant::MayBackward:
    c.spec.gens = {focus};
    c.spec.kills = kills;
    c.spec.targets = gens;
    break;
  case GKVariant::MustForward:
    // refute "every run reaching focus saw a gen, kill-free afterwards":
    // track the run start and every kill as violation witnesses, killed in
    // turn by a real gen.
    c.spec.gens = kill_not_gen;
    c.spec.kills = kill_or_gen;
    c.spec.targets = {focus};
    c.spec.virtual_start = true;
    c.negate = true;
    break;
  case GKVariant::MustBackward:
    // refute "every continuation of focus meets a gen before any kill":
    // a focus occurrence reaching a kill first, or surviving to the end,
    // is a violation.
    c.spec.gens = {focus};
    c.spec.kills = kill_or_gen;
    c.spec.targets = kill_not_gen;
    c.spec.detect_at_end = true;
    c.negate = true;
    break;
  }
  return c;
}

// ---- naive three-state framework ----

namespace {
using Tab = std::array<int, 3>;
} // namespace

Framework::Val NaiveGenKillFramework::join_val(const Val& a, const Val& b) const {
  return std::max(std::any_cast<int>(a), std::any_cast<int>(b));
}
bool NaiveGenKillFramework::val_equal(const Val& a, const Val& b) const {
  return std::any_cast<int>(a) == std::any_cast<int>(b);
}
Framework::Val NaiveGenKillFramework::apply(const Xf& f, const Val& v) const {
  int x = std::any_cast<int>(v);
  if (x < 0) return -1;
  return std::any_cast<const Tab&>(f)[x];
}
std::string NaiveGenKillFramework::show_val(const Val& v) const {
  return std::to_string(std::any_cast<int>(v));
}

Framework::Xf NaiveGenKillFramework::identity() const { return Tab{0, 1, 2}; }

Framework::Xf NaiveGenKillFramework::base(const Diagram&, Loc l) const {
  if (l == gen_) return Tab{1, 1, 2};
  if (l == target_) return Tab{0, 2, 2};
  for (Loc k : kills_)
    if (k == l) return Tab{0, 0, 2};
  return Tab{0, 1, 2};
}
Framework::Xf NaiveGenKillFramework::compose(const Xf& a, const Xf& b) const {
  const Tab& x = std::any_cast<const Tab&>(a);
  const Tab& y = std::any_cast<const Tab&>(b);
  return Tab{y[x[0]], y[x[1]], y[x[2]]};
}
Framework::Xf NaiveGenKillFramework::join(const Xf& a, const Xf& b) const {
  const Tab& x = std::any_cast<const Tab&>(a);
  const Tab& y = std::any_cast<const Tab&>(b);
  return Tab{std::max(x[0], y[0]), std::max(x[1], y[1]), std::max(x[2], y[2])};
}
bool NaiveGenKillFramework::equal(const Xf& a, const Xf& b) const {
  return std::any_cast<const Tab&>(a) == std::any_cast<const Tab&>(b);
}
std::string NaiveGenKillFramework::show_xf(const Xf& f) const {
  const Tab& t = std::any_cast<const Tab&>(f);
  return "[" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
         std::to_string(t[2]) + "]";
}

std::vector<Framework::Val>
NaiveGenKillFramework::sample_values(const Diagram&, std::mt19937& rng,
                                     int count) const {
  std::uniform_int_distribution<int> st(0, 2);
  std::vector<Val> out;
  for (int i = 0; i < count; ++i) out.push_back(st(rng));
  return out;
}

} // namespace negot
