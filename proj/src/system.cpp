#include "splab/dyadic/system.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "splab/core/parallel.hpp"
#include "splab/core/rng.hpp"
#include "splab/metrics/metrics.hpp"

namespace splab::dyadic {

double DyadicSystem::tent_height(int k) const {
  const auto& cfg = grid_->config();
  return cfg.delta_cal * cfg.delta_cal * std::pow(cfg.s, -2.0 * k);
}

std::pair<double, double> DyadicSystem::kube_band(int k) const {
  return {tent_height(k + 1), tent_height(k)};
}

int DyadicSystem::level_of_delta(double delta) const {
  const auto& cfg = grid_->config();
  const double top = cfg.delta_cal * cfg.delta_cal;
  if (delta >= top) return -1;
  return static_cast<int>(std::floor(std::log(top / delta) /
                                     (2.0 * std::log(cfg.s))));
}

LocateResult DyadicSystem::locate(const Cn& z) const {
  LocateResult out;
  const Projection p = boundary_project(domain(), z);
  const int want = level_of_delta(p.delta);
  if (want < 0) {
    out.kube = KubeId{-1, -1};
    return out;
  }
  const int depth = std::min(want, grid_->deepest_level());
  const auto [reached, cube] = grid_->locate_boundary(p.pi, depth);
  out.kube = KubeId{reached, cube};
  out.truncated = reached < want;
  // chain: ancestors of the reached cube
  out.chain.assign(reached + 1, -1);
  int c = cube;
  for (int k = reached; k >= 0; --k) {
    out.chain[k] = c;
    c = grid_->level(k).parent.empty() ? -1 : grid_->level(k).parent[c];
  }
  return out;
}

namespace {

/// Largest t <= t_upper with pi(xi - t nu) == xi; bisection against the
/// projection (cut-locus cap of the inward normal fiber).
double fiber_cap(const Domain& dom, const Cn& xi, double t_upper) {
  const Cn nu = outward_normal(dom, xi);
  const double tol = 1e-4;
  auto ok = [&](double t) {
    const Cn z = xi - t * nu;
    if (dom.rho(z) >= 0) return false;
    const Projection p = boundary_project(dom, z);
    return dist(p.pi, xi) < std::max(10.0 * tol, 0.05 * t);
  };
  if (ok(t_upper)) return t_upper;
  double lo = 0.0, hi = t_upper;
  for (int i = 0; i < 30; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

/// Integral over [lo, hi] of det(I - tW(xi)) dt; the integrand is a
/// polynomial of degree 2n-1, 4-point Gauss-Legendre is exact for n <= 2.
double fiber_volume_factor(const Domain& dom, const Cn& xi, double lo,
                           double hi) {
  if (hi <= lo) return 0.0;
  static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                               0.3399810435848563, 0.8611363115940526};
  static const double gw[4] = {0.3478548451374538, 0.6521451548625461,
                               0.6521451548625461, 0.3478548451374538};
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[i];
    s += gw[i] * normal_offset_jacobian(dom, xi, t);
  }
  return 0.5 * (hi - lo) * s;
}

}  // namespace

DyadicSystem build_tents_kubes(const DyadicGrid& grid, std::size_t vol_samples,
                               std::uint64_t seed) {
  const Domain& dom = grid.domain();
  DyadicSystem sys;
  sys.grid_ = &grid;
  const auto& cfg = grid.config();

  sys.info_.resize(grid.deepest_level() + 1);
  for (int k = 0; k <= grid.deepest_level(); ++k) {
    const auto& lev = grid.level(k);
    auto& infos = sys.info_[k];
    infos.resize(lev.net.size());
    const double h_k = cfg.delta_cal * cfg.delta_cal * std::pow(cfg.s, -2.0 * k);

    par::parallel_for(lev.net.size(), [&](std::size_t j) {
      KubeInfo& info = infos[j];
      const Cn& p = lev.net[j];
      info.sigma = lev.sigma.empty() ? 0.0 : lev.sigma[j];

      // center: half the sup of the fiber depth over p
      const double cap =
          h_k > 0.5 * dom.tubular_radius()
              ? fiber_cap(dom, p, std::min(h_k, dom.inradius()))
              : h_k;
      info.center = p - (0.5 * cap) * outward_normal(dom, p);
      if (info.sigma <= 0) info.flagged = true;
    });
  }

  // ---- volumes: sigma-weighted sample of each base cube, exact in t.
  // Full levels reuse the dense assignment; survey levels resample their
  // cube through cap sampling around the net point.
  for (int k = 0; k <= grid.deepest_level(); ++k) {
    const auto& lev = grid.level(k);
    auto& infos = sys.info_[k];
    const auto [band_lo, band_hi] = sys.kube_band(k);

    if (lev.full) {
      const auto& dense = grid.dense();
      const auto& assign = grid.dense_assignment(k);
      // bucket dense points per cube
      std::vector<std::vector<int>> bucket(lev.net.size());
      for (std::size_t i = 0; i < dense.size(); ++i)
        if (assign[i] >= 0) bucket[assign[i]].push_back(static_cast<int>(i));
      par::parallel_for(lev.net.size(), [&](std::size_t j) {
        auto& info = infos[j];
        if (info.flagged) return;
        const auto& idx = bucket[j];
        const std::size_t take = std::min<std::size_t>(idx.size(), vol_samples);
        MeanVar mv;
        double wsum = 0.0;
        Rng rng(item_seed(seed, 31 * k + j));
        for (std::size_t t = 0; t < take; ++t) {
          const int i = idx[take == idx.size()
                                ? t
                                : rng.index(idx.size())];
          const Cn& xi = dense.points[i];
          const double hi_eff =
              band_hi > 0.5 * dom.tubular_radius()
                  ? std::min(band_hi, fiber_cap(dom, xi, std::min(band_hi, dom.inradius())))
                  : band_hi;
          const double v = fiber_volume_factor(dom, xi, band_lo, hi_eff);
          mv.add(v);
          wsum += dense.weights[i];
        }
        (void)wsum;
        if (take == 0) {
          info.flagged = true;
          return;
        }
        info.volume = info.sigma * mv.mean;
        info.volume_se = info.sigma * mv.se_of_mean();
        if (info.volume <= 0) info.flagged = true;
      });
    } else {
      par::parallel_for(lev.net.size(), [&](std::size_t j) {
        auto& info = infos[j];
        if (info.flagged) return;
        const double alpha =
            std::min(1.2, 5.0 * lev.scale / dom.bounding_radius());
        const auto cap_pts = sample_boundary_cap(
            dom, lev.net[j], alpha, 2048, item_seed(seed, 997 * k + j));
        MeanVar mv;
        for (std::size_t i = 0; i < cap_pts.size(); ++i) {
          const auto [lr, lc] =
              grid.locate_boundary(cap_pts.points[i], k);
          if (lr != k || lc != static_cast<int>(j)) continue;
          mv.add(fiber_volume_factor(dom, cap_pts.points[i], band_lo, band_hi));
        }
        if (mv.n < 16) {
          info.flagged = true;
          return;
        }
        info.volume = info.sigma * mv.mean;
        info.volume_se = info.sigma * mv.se_of_mean();
      });
    }
  }

  // ---- beta calibration: sampled sup of d_K(center, kube point)
  if (dom.has_exact_kobayashi()) {
    double beta = 0.0;
    Rng rng(item_seed(seed, 4242));
    for (int k = 1; k <= grid.deepest_level(); ++k) {
      const auto& lev = grid.level(k);
      const auto [band_lo, band_hi] = sys.kube_band(k);
      for (std::size_t j = 0; j < lev.net.size(); ++j) {
        if (sys.info_[k][j].flagged) continue;
        // sample cube boundary points from the dense/local machinery
        std::vector<Cn> base;
        if (lev.full) {
          const auto& assign = grid.dense_assignment(k);
          for (std::size_t i = 0; i < grid.dense().size() && base.size() < 40; ++i)
            if (assign[i] == static_cast<int>(j) && rng.uniform() < 0.25)
              base.push_back(grid.dense().points[i]);
        } else {
          const auto cap_pts = sample_boundary_cap(
              dom, lev.net[j], std::min(1.2, 5.0 * lev.scale / dom.bounding_radius()),
              512, item_seed(seed, 7001 * k + j));
          for (std::size_t i = 0; i < cap_pts.size() && base.size() < 40; ++i) {
            const auto [lr, lc] = grid.locate_boundary(cap_pts.points[i], k);
            if (lr == k && lc == static_cast<int>(j))
              base.push_back(cap_pts.points[i]);
          }
        }
        for (const Cn& xi : base) {
          const double t = rng.uniform(band_lo, band_hi);
          const Cn z = xi - t * outward_normal(dom, xi);
          if (dom.rho(z) >= 0) continue;
          beta = std::max(
              beta, metrics::kobayashi_exact_ball(dom, sys.info_[k][j].center, z));
        }
      }
    }
    sys.beta_ = beta * 1.05;
  } else {
    // proxy-based surrogate: k + calibrated slack
    double beta = 0.0;
    Rng rng(item_seed(seed, 4243));
    for (int k = 1; k <= grid.deepest_level(); ++k) {
      const auto& lev = grid.level(k);
      const auto [band_lo, band_hi] = sys.kube_band(k);
      for (std::size_t j = 0; j < lev.net.size(); ++j) {
        if (sys.info_[k][j].flagged || !lev.full) continue;
        const auto& assign = grid.dense_assignment(k);
        int found = 0;
        for (std::size_t i = 0; i < grid.dense().size() && found < 20; ++i) {
          if (assign[i] != static_cast<int>(j)) continue;
          ++found;
          const double t = rng.uniform(band_lo, band_hi);
          const Cn z = grid.dense().points[i] - t * outward_normal(dom, grid.dense().points[i]);
          if (dom.rho(z) >= 0) continue;
          beta = std::max(beta,
                          metrics::kobayashi_proxy(dom, sys.info_[k][j].center, z));
        }
      }
    }
    sys.beta_ = beta * 1.05 + 2.0;  // proxy slack
  }
  return sys;
}

LineFit measure_law_fit(const DyadicSystem& sys, int k_lo, int k_hi) {
  std::vector<double> x, y;
  for (int k = k_lo; k <= std::min(k_hi, sys.grid().deepest_level()); ++k) {
    for (const auto& info : sys.kubes()[k]) {
      if (info.flagged || info.volume <= 0) continue;
      x.push_back(k);
      y.push_back(std::log(info.volume));
    }
  }
  return fit_line(x, y);
}

std::vector<RefinedPiece> refine_kubes(const DyadicSystem& sys,
                                       const KubeId& id, int n_ref,
                                       std::uint64_t seed) {
  const DyadicGrid& grid = sys.grid();
  const Domain& dom = grid.domain();
  const auto [band_lo, band_hi] = sys.kube_band(id.level);
  const auto& lev = grid.level(id.level);
  const double s2 = grid.config().s * grid.config().s;

  // boundary patches: maximal net of radius scale/n_ref over the cube
  std::vector<Cn> base;
  if (lev.full) {
    const auto& assign = grid.dense_assignment(id.level);
    for (std::size_t i = 0; i < grid.dense().size(); ++i)
      if (assign[i] == id.index) base.push_back(grid.dense().points[i]);
  } else {
    const auto cap_pts = sample_boundary_cap(
        dom, lev.net[id.index],
        std::min(1.2, 5.0 * lev.scale / dom.bounding_radius()), 4096,
        item_seed(seed, 555));
    for (std::size_t i = 0; i < cap_pts.size(); ++i) {
      const auto [lr, lc] = grid.locate_boundary(cap_pts.points[i], id.level);
      if (lr == id.level && lc == id.index) base.push_back(cap_pts.points[i]);
    }
  }
  std::vector<Cn> carry{lev.net[id.index]};
  const auto picked =
      build_net(dom, base, carry, lev.scale / n_ref, item_seed(seed, 556));
  std::vector<Cn> anchors{lev.net[id.index]};
  for (auto idx : picked) anchors.push_back(base[idx]);

  std::vector<RefinedPiece> out;
  for (int l = 1; l <= n_ref; ++l) {
    const double c_lo = 1.0 + (l - 1) * (s2 - 1.0) / n_ref;
    const double c_hi = 1.0 + l * (s2 - 1.0) / n_ref;
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      RefinedPiece piece;
      piece.parent = id;
      piece.radial_index = l;
      piece.patch_index = static_cast<int>(a);
      piece.anchor = anchors[a];
      piece.band_lo = c_lo * band_lo;
      piece.band_hi = c_hi * band_lo;
      out.push_back(piece);
    }
  }
  return out;
}

double refined_beta(const DyadicSystem& sys, int n_ref, int level,
                    std::size_t samples, std::uint64_t seed) {
  const DyadicGrid& grid = sys.grid();
  const Domain& dom = grid.domain();
  if (!dom.has_exact_kobayashi())
    throw std::invalid_argument("refined_beta needs the exact oracle");
  Rng rng(seed);
  double beta = 0.0;
  const auto& lev = grid.level(level);
  int used = 0;
  for (std::size_t j = 0; j < lev.net.size() && used < 6; ++j) {
    if (sys.kube(KubeId{level, static_cast<int>(j)}).flagged) continue;
    ++used;
    const KubeId id{level, static_cast<int>(j)};
    const auto pieces = refine_kubes(sys, id, n_ref, item_seed(seed, j));
    // assign sampled kube points to pieces (nearest anchor + radial band)
    const auto& assign = grid.dense_assignment(level);
    std::vector<Cn> base;
    for (std::size_t i = 0; i < grid.dense().size(); ++i)
      if (lev.full && assign[i] == static_cast<int>(j))
        base.push_back(grid.dense().points[i]);
    if (base.empty()) continue;
    for (std::size_t t = 0; t < samples; ++t) {
      const Cn& xi = base[rng.index(base.size())];
      const auto [blo, bhi] = sys.kube_band(level);
      const double tt = rng.uniform(blo, bhi);
      const Cn z = xi - tt * outward_normal(dom, xi);
      if (dom.rho(z) >= 0) continue;
      // piece of z: radial band + nearest anchor
      const RefinedPiece* best = nullptr;
      double bd = 1e300;
      for (const auto& piece : pieces) {
        if (tt < piece.band_lo || tt >= piece.band_hi) continue;
        const double dd = assign_dist(dom, xi, piece.anchor);
        if (dd < bd) {
          bd = dd;
          best = &piece;
        }
      }
      if (!best) continue;
      // representative point of the piece: anchor pushed to the band middle
      const Cn rep = best->anchor -
                     (0.5 * (best->band_lo + best->band_hi)) *
                         outward_normal(dom, best->anchor);
      beta = std::max(beta, metrics::kobayashi_exact_ball(dom, rep, z));
    }
  }
  return beta;
}

}  // namespace splab::dyadic
