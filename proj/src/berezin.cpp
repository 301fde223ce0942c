#include "splab/berezin/berezin.hpp"

#include <cmath>

#include "splab/core/parallel.hpp"
#include "splab/core/rng.hpp"

namespace splab::berezin {

cxd modified_berezin(const NormalizedKernel& kernel, const SymbolFn& b) {
  return berezin_average(kernel, b);
}

DyadicBerezinField::Eval DyadicBerezinField::eval(const Cn& z) const {
  Eval out;
  const auto loc = sys_->locate(z);
  out.truncated = loc.truncated;
  out.kube = loc.kube;
  if (loc.kube.level < 0) return out;
  if (ok_[loc.kube.level][loc.kube.index] == 0) return out;
  out.value = values_[loc.kube.level][loc.kube.index];
  out.usable = true;
  return out;
}

DyadicBerezinField dyadic_berezin(const dyadic::DyadicSystem& sys,
                                  const SymbolFn& b, std::size_t quad_points,
                                  std::uint64_t seed) {
  const Domain& dom = sys.domain();
  DyadicBerezinField field;
  field.sys_ = &sys;
  field.beta_ = sys.beta();

  const auto& grid = sys.grid();
  field.values_.resize(grid.deepest_level() + 1);
  field.ok_.resize(grid.deepest_level() + 1);
  std::size_t starved = 0;

  for (int k = 0; k <= grid.deepest_level(); ++k) {
    const auto& lev = grid.level(k);
    auto& vals = field.values_[k];
    auto& ok = field.ok_[k];
    vals.assign(lev.net.size(), cxd{0.0, 0.0});
    ok.assign(lev.net.size(), 0);
    std::vector<char> starve(lev.net.size(), 0);
    par::parallel_for(lev.net.size(), [&](std::size_t j) {
      const auto& info = sys.kube(dyadic::KubeId{k, static_cast<int>(j)});
      if (info.flagged) return;
      try {
        vals[j] = ball_average(dom, info.center, sys.beta(), b, quad_points,
                               item_seed(seed, 131 * k + j));
        ok[j] = 1;
      } catch (const std::runtime_error&) {
        starve[j] = 1;
      }
    });
    for (char s : starve) starved += s;
  }
  field.starved_ = starved;
  return field;
}

}  // namespace splab::berezin
