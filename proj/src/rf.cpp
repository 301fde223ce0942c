#include "splab/sampling/rf.hpp"

#include <cmath>
#include <stdexcept>

#include "splab/core/parallel.hpp"
#include "splab/core/rng.hpp"
#include "splab/domain/boundary.hpp"
#include "splab/metrics/metrics.hpp"

namespace splab {

PeakedQuad make_peaked_quad(const SampleCloud& cloud, const Cn& z,
                            std::size_t n_near, std::uint64_t seed) {
  const Domain& dom = cloud.domain();
  const int n = dom.dim();
  const Projection pz = boundary_project(dom, z);
  const double r_max = 0.3 * dom.inradius();
  const metrics::NormalFrame frame = metrics::normal_frame(dom, z);

  auto in_box = [&](const Cn& w, double s) {
    const Cn diff = w - z;
    if (std::abs(hdot(diff, frame.axes[0])) >= s) return false;
    const double rt = std::sqrt(s);
    for (int j = 1; j < n; ++j)
      if (std::abs(hdot(diff, frame.axes[j])) >= rt) return false;
    return true;
  };
  auto box_vol = [&](double s) {
    double v = 4.0 * s * s;
    for (int j = 1; j < n; ++j) v *= 4.0 * s;
    return v;
  };

  // geometric ladder of nested boxes from the peak scale to the domain scale
  std::vector<double> scales{std::min(pz.delta, r_max)};
  while (scales.back() < r_max)
    scales.push_back(std::min(2.0 * scales.back(), r_max));
  const std::size_t levels = scales.size();
  const std::size_t n_per = std::max<std::size_t>(256, n_near / levels);

  PeakedQuad q;
  std::vector<Cn> pts(n_per);
  std::vector<char> keep(n_per);
  for (std::size_t lev = 0; lev < levels; ++lev) {
    const double s = scales[lev];
    const double inner = lev == 0 ? 0.0 : scales[lev - 1];
    const double rt = std::sqrt(s);
    par::parallel_for(n_per, [&](std::size_t i) {
      Rng rng(item_seed(seed ^ (0xbeefULL + lev), i));
      Cn w = z;
      w += cxd{rng.uniform(-s, s), rng.uniform(-s, s)} * frame.axes[0];
      for (int j = 1; j < n; ++j)
        w += cxd{rng.uniform(-rt, rt), rng.uniform(-rt, rt)} * frame.axes[j];
      pts[i] = w;
      keep[i] = dom.rho(w) < 0 && (inner == 0.0 || !in_box(w, inner));
    });
    const std::size_t begin = q.points.size();
    const double wgt = box_vol(s) / static_cast<double>(n_per);
    for (std::size_t i = 0; i < n_per; ++i) {
      if (!keep[i]) continue;
      q.points.push_back(pts[i]);
      q.weights.push_back(wgt);
    }
    q.regions.push_back({begin, q.points.size()});
    q.region_draws.push_back(n_per);
  }

  // far zone: global cloud points outside the outermost box
  const double s_top = scales.back();
  for (int m = -1; m < cloud.shell_count(); ++m) {
    const auto [b, e] = cloud.shell_range(m);
    const std::size_t begin = q.points.size();
    for (std::size_t i = b; i < e; ++i) {
      if (in_box(cloud[i].z, s_top)) continue;
      q.points.push_back(cloud[i].z);
      q.weights.push_back(cloud[i].weight);
    }
    q.regions.push_back({begin, q.points.size()});
    q.region_draws.push_back(
        m == -1 ? cloud.core_proposals() : (e - b));
  }
  return q;
}

Integral quad_sum(const PeakedQuad& q,
                  const std::function<double(const Cn&)>& f) {
  std::vector<double> contrib(q.points.size());
  par::parallel_for(q.points.size(), [&](std::size_t i) {
    contrib[i] = q.weights[i] * f(q.points[i]);
  });
  Integral out;
  out.value = par::kahan_sum(contrib);
  double var = 0.0;
  for (std::size_t r = 0; r < q.regions.size(); ++r) {
    const auto [b, e] = q.regions[r];
    const double cnt = static_cast<double>(q.region_draws[r]);
    if (cnt < 2) continue;
    double mean = 0.0;
    for (std::size_t i = b; i < e; ++i) mean += contrib[i];
    mean /= cnt;
    double s2 = 0.0;
    for (std::size_t i = b; i < e; ++i)
      s2 += (contrib[i] - mean) * (contrib[i] - mean);
    s2 += (cnt - static_cast<double>(e - b)) * mean * mean;
    s2 /= (cnt - 1.0);
    var += cnt * s2;
  }
  out.se = std::sqrt(var);
  return out;
}

Integral integrate_peaked(const SampleCloud& cloud, const Cn& z,
                          const std::function<double(const Cn&)>& f,
                          double K, std::size_t n_near, std::uint64_t seed) {
  (void)K;
  return quad_sum(make_peaked_quad(cloud, z, n_near, seed), f);
}

RfAudit rudin_forelli_audit(const SampleCloud& cloud, double a, double b,
                            const std::vector<Cn>& centers,
                            std::optional<double> tail_radius,
                            std::uint64_t seed) {
  const Domain& dom = cloud.domain();
  const int n = dom.dim();
  const double expo = n + 1 + a + b;

  RfAudit out;
  out.centers.resize(centers.size());
  std::vector<double> lx(centers.size()), ly(centers.size());

  for (std::size_t ci = 0; ci < centers.size(); ++ci) {
    const Cn& z = centers[ci];
    auto integrand = [&](const Cn& w) {
      if (tail_radius && metrics::kobayashi_exact_ball(dom, z, w) <= *tail_radius)
        return 0.0;
      const double F = metrics::big_f(dom, z, w);
      return std::pow(std::abs(dom.rho(w)), a) / std::pow(F, expo);
    };
    const Integral I = tail_radius
                           ? integrate(cloud, [&](const CloudPoint& p) {
                               return integrand(p.z);
                             })
                           : integrate_peaked(cloud, z, integrand, 32.0, 24576,
                                              item_seed(seed, ci));
    if (I.se > 0.1 * std::abs(I.value))
      throw std::runtime_error(
          "rudin_forelli_audit: quadrature SE above 10% at center " +
          std::to_string(ci));
    RfPoint pt;
    pt.z = z;
    pt.abs_rho = std::abs(dom.rho(z));
    pt.integral = I.value;
    pt.se = I.se;
    out.centers[ci] = pt;
    lx[ci] = std::log(pt.abs_rho);
    ly[ci] = std::log(std::max(pt.integral, 1e-300));
  }
  out.fit = fit_line(lx, ly);
  for (const auto& pt : out.centers)
    out.constant =
        std::max(out.constant, pt.integral * std::pow(pt.abs_rho, b));
  return out;
}

std::vector<Cn> delta_ladder(const Domain& dom, double delta_lo,
                             double delta_hi, int per_decade,
                             std::uint64_t seed) {
  std::vector<Cn> out;
  Rng rng(seed);
  const int decades = static_cast<int>(std::round(std::log10(delta_hi / delta_lo)));
  const int total = std::max(2, decades * per_decade + 1);
  for (int i = 0; i < total; ++i) {
    const double frac = static_cast<double>(i) / (total - 1);
    const double delta =
        delta_hi * std::pow(delta_lo / delta_hi, frac);
    const Cn u = rng.sphere_dir(dom.dim());
    const Cn xi = dom.radial_boundary_point(u);
    out.push_back(normal_offset(dom, xi, delta));
  }
  return out;
}

}  // namespace splab
