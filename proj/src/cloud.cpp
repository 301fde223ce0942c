#include "splab/sampling/cloud.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "splab/core/parallel.hpp"
#include "splab/core/rng.hpp"
#include "splab/domain/boundary.hpp"

namespace splab {

std::pair<std::size_t, std::size_t> SampleCloud::shell_range(int m) const {
  const std::size_t r = static_cast<std::size_t>(m + 1);
  return {offsets_[r], offsets_[r + 1]};
}

SampleCloud sample_interior(std::shared_ptr<const Domain> dom,
                            std::size_t n_pts, int n_shells,
                            std::uint64_t seed, double delta_floor) {
  const Domain& d = *dom;
  const int n = d.dim();
  const int rd = 2 * n;

  SampleCloud cloud;
  cloud.dom_ = dom;
  cloud.seed_ = seed;

  const double shell_top = std::min(0.5 * d.tubular_radius(), 0.45 * d.inradius());
  cloud.boundaries_.push_back(shell_top);
  for (int m = 1; m <= n_shells; ++m)
    cloud.boundaries_.push_back(
        std::max(shell_top * std::pow(2.0, -m), delta_floor));
  cloud.boundaries_.push_back(delta_floor);  // sliver shell (or the floor)
  while (cloud.boundaries_.size() > 2 &&
         cloud.boundaries_[cloud.boundaries_.size() - 2] <=
             cloud.boundaries_.back())
    cloud.boundaries_.erase(cloud.boundaries_.end() - 2);

  const std::size_t n_core = n_pts / 2;
  const std::size_t n_shell = std::max<std::size_t>(
      16, (n_pts - n_core) / static_cast<std::size_t>(n_shells + 1));

  cloud.offsets_.push_back(0);

  // ---- core: scrambled Halton in the bounding box, keep delta > shell_top.
  {
    const double R = d.bounding_radius();
    const double box_vol = std::pow(2.0 * R, rd);
    // Fixed proposal count keeps the estimator unbiased: the core contains
    // the centered ball of radius inradius - shell_top.
    const double core_lb =
        std::pow(M_PI, n) / std::tgamma(n + 1) *
        std::pow(std::max(d.inradius() - shell_top, 0.05), rd);
    const std::size_t n_prop = static_cast<std::size_t>(
        std::ceil(1.3 * static_cast<double>(n_core) * box_vol / core_lb));

    Halton halton(rd, seed);
    std::vector<CloudPoint> accepted(n_prop);
    std::vector<char> keep(n_prop, 0);
    par::parallel_for(n_prop, [&](std::size_t i) {
      double u[8];
      halton.point(i, u);
      Cn z(n);
      for (int j = 0; j < n; ++j)
        z[j] = cxd{R * (2 * u[2 * j] - 1), R * (2 * u[2 * j + 1] - 1)};
      if (d.rho(z) >= 0) return;
      const Projection p = boundary_project(d, z);
      if (p.delta <= shell_top) return;
      CloudPoint cp;
      cp.z = z;
      cp.weight = box_vol / static_cast<double>(n_prop);
      cp.delta = p.delta;
      cp.pi = p.pi;
      cp.shell = -1;
      accepted[i] = cp;
      keep[i] = 1;
    });
    cloud.core_proposals_ = n_prop;
    for (std::size_t i = 0; i < n_prop; ++i)
      if (keep[i]) cloud.pts_.push_back(accepted[i]);
    if (cloud.pts_.empty())
      throw std::runtime_error("sample_interior: core region starved");
  }
  cloud.offsets_.push_back(cloud.pts_.size());

  // ---- shells: boundary points + uniform normal offset, Jacobian weights.
  const double sphere = sphere_area(rd);
  for (int m = 0; m <= n_shells; ++m) {
    const double hi = cloud.boundaries_[m];
    const double lo = cloud.boundaries_[m + 1];
    const std::size_t base = cloud.pts_.size();
    cloud.pts_.resize(base + n_shell);
    par::parallel_for(n_shell, [&](std::size_t i) {
      Rng rng(item_seed(seed ^ (0x51abULL + m), i));
      const Cn u = rng.sphere_dir(n);
      const double Rb = d.radial_boundary_scale(u);
      const Cn xi = Rb * u;
      const Cn nu = outward_normal(d, xi);
      const double t = rng.uniform(lo, hi);
      CloudPoint cp;
      cp.z = xi - t * nu;
      cp.delta = t;
      cp.pi = xi;
      cp.shell = m;
      const double sigma_w =
          sphere / static_cast<double>(n_shell) * std::pow(Rb, rd - 1) /
          std::max(rdot(u, nu), 1e-9);
      cp.weight = sigma_w * (hi - lo) * normal_offset_jacobian(d, xi, t);
      cloud.pts_[base + i] = cp;
    });
    cloud.offsets_.push_back(cloud.pts_.size());
    if (cloud.pts_.size() == base)
      throw std::runtime_error("sample_interior: shell " + std::to_string(m) +
                               " starved");
  }
  return cloud;
}

SampleCloud sample_interior_plain(std::shared_ptr<const Domain> dom,
                                  std::size_t n_pts, std::uint64_t seed,
                                  double delta_floor) {
  const Domain& d = *dom;
  const int n = d.dim();
  const int rd = 2 * n;
  SampleCloud cloud;
  cloud.dom_ = dom;
  cloud.seed_ = seed;
  cloud.boundaries_ = {0.0, 0.0};  // single region, no shells
  cloud.offsets_.push_back(0);

  const double R = d.bounding_radius();
  const double box_vol = std::pow(2.0 * R, rd);
  const double vol_lb =
      std::pow(M_PI, n) / std::tgamma(n + 1) * std::pow(0.8 * d.inradius(), rd);
  const std::size_t n_prop = static_cast<std::size_t>(
      std::ceil(1.1 * static_cast<double>(n_pts) * box_vol / vol_lb));

  Halton halton(rd, seed);
  std::vector<CloudPoint> accepted(n_prop);
  std::vector<char> keep(n_prop, 0);
  par::parallel_for(n_prop, [&](std::size_t i) {
    double u[8];
    halton.point(i, u);
    Cn z(n);
    for (int j = 0; j < n; ++j)
      z[j] = cxd{R * (2 * u[2 * j] - 1), R * (2 * u[2 * j + 1] - 1)};
    if (d.rho(z) >= 0) return;
    const Projection p = boundary_project(d, z);
    if (p.delta <= delta_floor) return;
    CloudPoint cp;
    cp.z = z;
    cp.weight = box_vol / static_cast<double>(n_prop);
    cp.delta = p.delta;
    cp.pi = p.pi;
    cp.shell = -1;
    accepted[i] = cp;
    keep[i] = 1;
  });
  cloud.core_proposals_ = n_prop;
  for (std::size_t i = 0; i < n_prop; ++i)
    if (keep[i]) cloud.pts_.push_back(accepted[i]);
  cloud.offsets_.push_back(cloud.pts_.size());
  cloud.offsets_.push_back(cloud.pts_.size());  // empty sliver shell
  return cloud;
}

namespace {

Integral integrate_impl(const SampleCloud& cloud,
                        const std::function<double(const CloudPoint&)>& f,
                        bool parallel) {
  const auto& pts = cloud.points();
  std::vector<double> contrib(pts.size());
  auto body = [&](std::size_t i) { contrib[i] = pts[i].weight * f(pts[i]); };
  if (parallel)
    par::parallel_for(pts.size(), body);
  else
    par::serial_for(pts.size(), body);

  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!std::isfinite(contrib[i]))
      throw std::runtime_error("integrate: non-finite integrand at point " +
                               std::to_string(i));

  Integral out;
  out.value = par::kahan_sum(contrib);

  // region-wise variance of iid contributions; core rejections count as
  // zero draws of the same estimator
  double var = 0.0;
  for (int m = -1; m < cloud.shell_count(); ++m) {
    const auto [b, e] = cloud.shell_range(m);
    if (e - b < 2) continue;
    const double cnt = (m == -1) ? static_cast<double>(cloud.core_proposals())
                                 : static_cast<double>(e - b);
    double mean = 0.0;
    for (std::size_t i = b; i < e; ++i) mean += contrib[i];
    mean /= cnt;
    double s2 = 0.0;
    for (std::size_t i = b; i < e; ++i)
      s2 += (contrib[i] - mean) * (contrib[i] - mean);
    s2 += (cnt - static_cast<double>(e - b)) * mean * mean;  // zero draws
    s2 /= (cnt - 1.0);
    var += cnt * s2;
  }
  out.se = std::sqrt(var);
  return out;
}

}  // namespace

Integral integrate(const SampleCloud& cloud,
                   const std::function<double(const CloudPoint&)>& f) {
  return integrate_impl(cloud, f, true);
}

Integral integrate_reference(const SampleCloud& cloud,
                             const std::function<double(const CloudPoint&)>& f) {
  return integrate_impl(cloud, f, false);
}

}  // namespace splab
