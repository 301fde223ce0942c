#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splab/core/stats.hpp"
#include "splab/dyadic/grid.hpp"

namespace splab::dyadic {

struct KubeId {
  int level = -1;  // -1 = root slab K^{-1}
  int index = -1;
  bool operator==(const KubeId& o) const {
    return level == o.level && index == o.index;
  }
};

struct KubeInfo {
  Cn center;              // tent center c_j^k
  double volume = 0.0;    // kube volume estimate
  double volume_se = 0.0;
  double sigma = 0.0;     // boundary measure of the base cube
  bool flagged = false;   // empty/starved; excluded from regressions
};

struct LocateResult {
  KubeId kube;
  bool truncated = false;       // point deeper than the resolved structure
  std::vector<int> chain;       // cube index per level 0..kube.level
};

/// Tents and kubes over a dyadic grid. The tent over Q_j^k has height
/// s^{-2k} delta^2; the kube is the tent minus its children tents, which by
/// the nesting of cubes is exactly the band
///   {z : pi(z) in Q_j^k, s^{-2(k+1)} delta^2 <= |pi(z)-z| < s^{-2k} delta^2}
/// (the closed form is asserted against the subtractive definition in the
/// tests). Volumes integrate det(I - t W) exactly in t per sampled base
/// point, so only the sigma estimate carries Monte Carlo error.
class DyadicSystem {
 public:
  const DyadicGrid& grid() const { return *grid_; }
  const Domain& domain() const { return grid_->domain(); }
  double tent_height(int k) const;
  /// Fiber band of the kube at level k: [h_{k+1}, h_k).
  std::pair<double, double> kube_band(int k) const;

  const KubeInfo& kube(const KubeId& id) const {
    return info_[id.level][id.index];
  }
  const std::vector<std::vector<KubeInfo>>& kubes() const { return info_; }

  /// Kobayashi containment radius: every non-flagged kube fits in
  /// E(center, beta) (calibrated on exact-oracle domains, else via proxy).
  double beta() const { return beta_; }
  double beta_tilde() const { return 0.5 * (1.0 + beta_); }

  LocateResult locate(const Cn& z) const;
  /// Level a point of boundary distance delta belongs to (clamped >= -1).
  int level_of_delta(double delta) const;

  friend DyadicSystem build_tents_kubes(const DyadicGrid& grid,
                                        std::size_t vol_samples,
                                        std::uint64_t seed);
  friend class GridIo;

 private:
  const DyadicGrid* grid_ = nullptr;
  std::vector<std::vector<KubeInfo>> info_;
  double beta_ = 0.0;
};

/// Build centers, volumes, flags, and calibrate beta.
DyadicSystem build_tents_kubes(const DyadicGrid& grid,
                               std::size_t vol_samples = 4000,
                               std::uint64_t seed = 1);

/// log-volume vs level regression over the given level range, one point per
/// non-flagged kube (expected slope -(2n+2) log s).
LineFit measure_law_fit(const DyadicSystem& sys, int k_lo, int k_hi);

// -------------------------------------------------------------- refined kubes

struct RefinedPiece {
  KubeId parent;
  int radial_index = 0;      // which c_l shell
  int patch_index = 0;       // which boundary patch
  Cn anchor;                 // boundary anchor point of the patch
  double band_lo = 0.0, band_hi = 0.0;  // fiber band
};

/// Section-5.3 refinement: each kube splits into n_ref radial shells via
/// c_l = 1 + l (s^2 - 1)/n_ref and boundary patches of radius
/// s^{-k} delta / n_ref. Pieces partition the kube.
std::vector<RefinedPiece> refine_kubes(const DyadicSystem& sys,
                                       const KubeId& id, int n_ref,
                                       std::uint64_t seed);

/// Smallest radius beta' with every sampled refined piece inside
/// E(rep, beta') (exact-oracle domains).
double refined_beta(const DyadicSystem& sys, int n_ref, int level,
                    std::size_t samples, std::uint64_t seed);

// ------------------------------------------------------------------------ io

/// Versioned little-endian binary round trip for a grid + system.
void save_grid(const std::string& path, const DyadicGrid& grid,
               const DyadicSystem* sys);
struct LoadedGrid {
  DyadicGrid grid;
  std::optional<DyadicSystem> system;  // references grid
};
/// Load; the returned system (when present) points into the returned grid.
std::unique_ptr<LoadedGrid> load_grid(const std::string& path,
                                      std::shared_ptr<const Domain> dom);

}  // namespace splab::dyadic
