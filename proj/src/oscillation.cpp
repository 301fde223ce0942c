#include "splab/oscillation/bmo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "splab/berezin/peaking.hpp"
#include "splab/core/parallel.hpp"
#include "splab/core/rng.hpp"
#include "splab/metrics/metrics.hpp"

namespace splab::oscillation {

std::vector<Cn> stratified_centers(const Domain& dom, double delta_lo,
                                   double delta_hi, int per_decade,
                                   std::uint64_t seed) {
  std::vector<Cn> out;
  const int decades =
      std::max(1, static_cast<int>(std::round(std::log10(delta_hi / delta_lo))));
  Rng rng(seed);
  for (int d = 0; d < decades; ++d) {
    const double hi = delta_hi * std::pow(10.0, -d);
    const double lo = hi / 10.0;
    for (int i = 0; i < per_decade; ++i) {
      const double delta = lo * std::pow(hi / lo, rng.uniform());
      const Cn u = rng.sphere_dir(dom.dim());
      out.push_back(normal_offset(dom, dom.radial_boundary_point(u), delta));
    }
  }
  return out;
}

OscReport bmo_kobayashi(const Domain& dom, const Symbol& b, double r, double p,
                        const std::vector<Cn>& centers,
                        std::size_t quad_points, std::uint64_t seed) {
  OscReport rep;
  rep.symbol_id = b.id;
  rep.functional = "kobayashi";
  rep.p = p;
  rep.r = r;
  rep.centers.resize(centers.size());
  std::vector<char> starve(centers.size(), 0);

  par::parallel_for(centers.size(), [&](std::size_t ci) {
    const Cn& z = centers[ci];
    CenterOsc c;
    c.z = z;
    c.delta = boundary_distance(dom, z);
    try {
      const auto q = berezin::kobayashi_ball_quad(dom, z, r, quad_points,
                                                  item_seed(seed, ci));
      if (q.points.size() < 16 || q.volume <= 0)
        throw std::runtime_error("starved ball");
      // mean, then L^p oscillation on the same quadrature
      cxd mean{0.0, 0.0};
      for (std::size_t i = 0; i < q.points.size(); ++i)
        mean += q.weights[i] * b.eval(q.points[i]);
      mean /= q.volume;
      MeanVar mv;
      double acc = 0.0;
      for (std::size_t i = 0; i < q.points.size(); ++i) {
        const double osc = std::abs(b.eval(q.points[i]) - mean);
        acc += q.weights[i] * std::pow(osc, p);
      }
      c.value = std::pow(acc / q.volume, 1.0 / p);
      (void)mv;
    } catch (const std::runtime_error&) {
      starve[ci] = 1;
    }
    rep.centers[ci] = c;
  });

  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    if (starve[ci]) {
      ++rep.starved;
      continue;
    }
    rep.sup_value = std::max(rep.sup_value, rep.centers[ci].value);
  }
  return rep;
}

OscReport bmo_dyadic(const std::vector<const dyadic::DyadicSystem*>& systems,
                     const Symbol& b, double p, std::size_t quad_points,
                     std::uint64_t seed) {
  OscReport rep;
  rep.symbol_id = b.id;
  rep.functional = "dyadic";
  rep.p = p;

  for (const auto* sys : systems) {
    const auto& grid = sys->grid();
    const Domain& dom = grid.domain();
    for (int k = 0; k <= grid.deepest_level(); ++k) {
      const auto& lev = grid.level(k);
      const double height = sys->tent_height(k);

      // tent quadrature base points per cube
      std::vector<std::vector<std::pair<Cn, double>>> base(lev.net.size());
      if (lev.full) {
        const auto& assign = grid.dense_assignment(k);
        const auto& dense = grid.dense();
        for (std::size_t i = 0; i < dense.size(); ++i)
          if (assign[i] >= 0)
            base[assign[i]].push_back({dense.points[i], dense.weights[i]});
      } else {
        for (std::size_t j = 0; j < lev.net.size(); ++j) {
          if (lev.sigma[j] <= 0) continue;
          const auto cap_pts = sample_boundary_cap(
              dom, lev.net[j],
              std::min(1.2, 5.0 * lev.scale / dom.bounding_radius()), 2048,
              item_seed(seed, 77 * k + j));
          for (std::size_t i = 0; i < cap_pts.size(); ++i) {
            const auto [lr, lc] = grid.locate_boundary(cap_pts.points[i], k);
            if (lr == k && lc == static_cast<int>(j))
              base[j].push_back({cap_pts.points[i], cap_pts.weights[i]});
          }
        }
      }

      std::vector<CenterOsc> tents(lev.net.size());
      std::vector<int> state(lev.net.size(), 0);  // 0 skip, 1 ok, 2 starve
      par::parallel_for(lev.net.size(), [&](std::size_t j) {
        if (lev.sigma.empty() || lev.sigma[j] <= 0) return;
        auto& pts = base[j];
        if (pts.size() < 8) {
          state[j] = 2;
          return;
        }
        Rng rng(item_seed(seed, 131 * k + j));
        const std::size_t m = std::min(quad_points, pts.size() * 4);
        std::vector<cxd> vals(m);
        std::vector<double> wts(m);
        for (std::size_t t = 0; t < m; ++t) {
          const auto& [xi, sw] = pts[rng.index(pts.size())];
          const double tt = rng.uniform(0.0, height);
          const Cn z = normal_offset(dom, xi, tt);
          if (dom.rho(z) >= 0 || boundary_distance(dom, z) > height) {
            // folded fiber piece outside the tent; zero weight
            wts[t] = 0.0;
            vals[t] = cxd{0.0, 0.0};
            continue;
          }
          wts[t] = sw * static_cast<double>(pts.size()) * height *
                   normal_offset_jacobian(dom, xi, tt) / static_cast<double>(m);
          vals[t] = b.eval(z);
        }
        double vol = 0.0;
        cxd mean{0.0, 0.0};
        for (std::size_t t = 0; t < m; ++t) {
          vol += wts[t];
          mean += wts[t] * vals[t];
        }
        if (vol <= 0) {
          state[j] = 2;
          return;
        }
        mean /= vol;
        double acc = 0.0;
        for (std::size_t t = 0; t < m; ++t)
          acc += wts[t] * std::pow(std::abs(vals[t] - mean), p);
        CenterOsc c;
        c.z = lev.net[j];
        c.delta = height;
        c.value = std::pow(acc / vol, 1.0 / p);
        tents[j] = c;
        state[j] = 1;
      });
      for (std::size_t j = 0; j < lev.net.size(); ++j) {
        if (state[j] == 2) ++rep.starved;
        if (state[j] != 1) continue;
        rep.centers.push_back(tents[j]);
        rep.sup_value = std::max(rep.sup_value, tents[j].value);
      }
    }
  }
  return rep;
}

OscReport bmo_berezin(const SampleCloud& cloud, const Symbol& b, double p,
                      const std::vector<Cn>& centers, std::size_t n_near,
                      std::uint64_t seed) {
  OscReport rep;
  rep.symbol_id = b.id;
  rep.functional = "berezin";
  rep.p = p;
  const Domain& dom = cloud.domain();

  rep.centers.resize(centers.size());
  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    const Cn& z = centers[ci];
    const auto kernel =
        berezin::make_normalized_kernel(cloud, z, n_near, item_seed(seed, ci));
    const cxd btilde = berezin::berezin_average(kernel, b.eval);
    const double osc_p = berezin::berezin_weighted_integral(
        kernel,
        [&](const Cn& w) { return std::pow(std::abs(b.eval(w) - btilde), p); });
    CenterOsc c;
    c.z = z;
    c.delta = boundary_distance(dom, z);
    c.value = std::pow(std::max(osc_p, 0.0), 1.0 / p);
    rep.centers[ci] = c;
    rep.sup_value = std::max(rep.sup_value, c.value);
  }
  return rep;
}

VmoProfile vmo_profile(const OscReport& report, double cut, double frac) {
  VmoProfile prof;
  for (const auto& c : report.centers) prof.bulk = std::max(prof.bulk, c.value);
  // thresholds: decades from the largest center delta down to the smallest
  double dmax = 0.0, dmin = 1e300;
  for (const auto& c : report.centers) {
    dmax = std::max(dmax, c.delta);
    dmin = std::min(dmin, c.delta);
  }
  if (report.centers.empty()) return prof;
  for (double t = dmax; t >= dmin * 0.999; t *= 0.5) {
    double sup = 0.0;
    for (const auto& c : report.centers)
      if (c.delta < t) sup = std::max(sup, c.value);
    prof.thresholds.push_back(t);
    prof.sup_below.push_back(sup);
  }
  // classification at the cut; fall back to the deepest sampled half
  // decade when no center sits below it
  double eff_cut = cut;
  if (dmin >= cut) eff_cut = dmin * 3.0;
  double sup_at_cut = 0.0;
  bool any = false;
  for (const auto& c : report.centers)
    if (c.delta < eff_cut) {
      sup_at_cut = std::max(sup_at_cut, c.value);
      any = true;
    }
  prof.vmo = any && sup_at_cut < frac * prof.bulk;
  return prof;
}

Bda2Result bda2_distance(const Domain& dom, const Symbol& b, const Cn& z,
                         double r, int degree, std::size_t quad_points,
                         std::uint64_t seed) {
  const int n = dom.dim();
  const auto q = berezin::kobayashi_ball_quad(dom, z, r, quad_points, seed);
  if (q.points.size() < 32 || q.volume <= 0)
    throw std::runtime_error("bda2_distance: starved ball");

  const metrics::NormalFrame frame = metrics::normal_frame(dom, z);
  // coordinate scales for conditioning: spread of the quadrature points
  std::array<double, 4> scale{};
  scale.fill(1e-12);
  for (const auto& w : q.points) {
    const Cn diff = w - z;
    for (int j = 0; j < n; ++j)
      scale[j] = std::max(scale[j], std::abs(hdot(diff, frame.axes[j])));
  }

  // monomial multi-indices of total degree <= degree
  std::vector<std::array<int, 4>> alphas;
  std::array<int, 4> a{};
  std::function<void(int, int)> gen = [&](int pos, int left) {
    if (pos == n) {
      alphas.push_back(a);
      return;
    }
    for (int d = 0; d <= left; ++d) {
      a[pos] = d;
      gen(pos + 1, left - d);
    }
  };

  for (int deg = degree; deg >= 0; --deg) {
    alphas.clear();
    gen(0, deg);
    const int M = static_cast<int>(alphas.size());
    const int N = static_cast<int>(q.points.size());
    Eigen::MatrixXcd A(N, M);
    Eigen::VectorXcd rhs(N);
    for (int i = 0; i < N; ++i) {
      const double sw = std::sqrt(q.weights[i]);
      const Cn diff = q.points[i] - z;
      for (int m = 0; m < M; ++m) {
        cxd mono{1.0, 0.0};
        for (int j = 0; j < n; ++j) {
          const cxd c = hdot(diff, frame.axes[j]) / scale[j];
          for (int dd = 0; dd < alphas[m][j]; ++dd) mono *= c;
        }
        A(i, m) = sw * mono;
      }
      rhs(i) = sw * b.eval(q.points[i]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    if (qr.rank() < M && deg > 0) continue;  // reduce degree
    const Eigen::VectorXcd coef = qr.solve(rhs);
    const double res2 = (A * coef - rhs).squaredNorm();
    Bda2Result out;
    out.value = std::sqrt(res2 / q.volume);
    out.degree = deg;
    out.reduced = deg < degree;
    return out;
  }
  throw std::runtime_error("bda2_distance: no solvable degree");
}

}  // namespace splab::oscillation
