#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "splab/berezin/peaking.hpp"
#include "splab/dyadic/system.hpp"

namespace splab::berezin {

using SymbolFn = std::function<cxd(const Cn&)>;

/// Modified (continuous) Berezin transform <b s_z, s_z> with the same-cloud
/// normalization of s_z, so constants map to themselves exactly.
cxd modified_berezin(const NormalizedKernel& kernel, const SymbolFn& b);

/// Piecewise-constant field over kubes: value = <b>_{E(c_j^k, beta)}.
class DyadicBerezinField {
 public:
  const dyadic::DyadicSystem& system() const { return *sys_; }
  double beta() const { return beta_; }

  /// Value on the kube containing z (root slab/starved kubes unusable).
  struct Eval {
    cxd value{0.0, 0.0};
    bool usable = false;
    bool truncated = false;
    dyadic::KubeId kube;
  };
  Eval eval(const Cn& z) const;

  cxd value(const dyadic::KubeId& id) const {
    return values_[id.level][id.index];
  }
  bool usable(const dyadic::KubeId& id) const {
    return ok_[id.level][id.index] != 0;
  }
  std::size_t starved_count() const { return starved_; }

  friend DyadicBerezinField dyadic_berezin(const dyadic::DyadicSystem& sys,
                                           const SymbolFn& b,
                                           std::size_t quad_points,
                                           std::uint64_t seed);

 private:
  const dyadic::DyadicSystem* sys_ = nullptr;
  double beta_ = 0.0;
  std::vector<std::vector<cxd>> values_;
  std::vector<std::vector<char>> ok_;
  std::size_t starved_ = 0;
};

/// Build the field: one Kobayashi-ball average per non-flagged kube.
DyadicBerezinField dyadic_berezin(const dyadic::DyadicSystem& sys,
                                  const SymbolFn& b,
                                  std::size_t quad_points = 1024,
                                  std::uint64_t seed = 1);

}  // namespace splab::berezin
