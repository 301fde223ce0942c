#include "splab/berezin/peaking.hpp"

#include <cmath>
#include <stdexcept>

#include "splab/core/parallel.hpp"
#include "splab/core/rng.hpp"
#include "splab/metrics/metrics.hpp"

namespace splab::berezin {

double peaking_eval(const Domain& dom, const Cn& z, double p, const Cn& w) {
  const double pp = p / (p - 1.0);
  const double n1 = dom.dim() + 1;
  const double g = std::abs(metrics::levi_g(dom, z, w));
  const double floor = 1e-12 * std::abs(dom.rho(z));
  if (g < floor)
    throw std::runtime_error("peaking_eval: |g| under the relative floor");
  return std::pow(std::abs(dom.rho(z)), n1 / pp) / std::pow(g, n1);
}

cxd peaking_eval_cx(const Domain& dom, const Cn& z, double p, const Cn& w) {
  const double pp = p / (p - 1.0);
  const int n1 = dom.dim() + 1;
  const cxd g = metrics::levi_g(dom, z, w);
  const double floor = 1e-12 * std::abs(dom.rho(z));
  if (std::abs(g) < floor)
    throw std::runtime_error("peaking_eval_cx: |g| under the relative floor");
  cxd gp{1.0, 0.0};
  for (int j = 0; j < n1; ++j) gp *= g;
  return std::pow(std::abs(dom.rho(z)), n1 / pp) / gp;
}

BallQuad kobayashi_ball_quad(const Domain& dom, const Cn& center, double r,
                             std::size_t n, std::uint64_t seed, double c_bb) {
  const int cd = dom.dim();
  const metrics::NormalFrame frame = metrics::normal_frame(dom, center);
  const double delta = boundary_project(dom, center).delta;
  const bool exact = dom.has_exact_kobayashi();

  // pilot: polydisk extent of the ball boundary (exact mode) or of the
  // proxy ball grown by the sandwich slack
  double lam = 0.0;
  {
    Rng rng(item_seed(seed, 1));
    const double t = std::tanh(r);
    for (int i = 0; i < 256; ++i) {
      Cn u = rng.sphere_dir(cd);
      u *= t;
      if (exact) {
        const Cn w = metrics::ball_automorphism(center, u);
        lam = std::max(lam, metrics::polydisk_size(dom, center, w));
      }
    }
    if (!exact || lam == 0.0) {
      // proxy extent: walk rays in frame coordinates until k > r + c_bb
      lam = std::exp(2.0 * (r + c_bb));
    }
  }
  lam *= 1.25;

  const double r_n = std::min(lam * delta, 1.2 * dom.bounding_radius());
  const double r_t = std::sqrt(r_n);
  double vol_box = 4.0 * r_n * r_n;
  for (int j = 1; j < cd; ++j) vol_box *= 4.0 * r_t * r_t;

  BallQuad out;
  std::vector<Cn> pts(n);
  std::vector<int> state(n);  // 0 reject, 1 inside, 2 uncertain
  par::parallel_for(n, [&](std::size_t i) {
    Rng rng(item_seed(seed, 100 + i));
    Cn w = center;
    w += cxd{rng.uniform(-r_n, r_n), rng.uniform(-r_n, r_n)} * frame.axes[0];
    for (int j = 1; j < cd; ++j)
      w += cxd{rng.uniform(-r_t, r_t), rng.uniform(-r_t, r_t)} * frame.axes[j];
    pts[i] = w;
    state[i] = 0;
    if (dom.rho(w) >= 0) return;
    if (exact) {
      state[i] = metrics::kobayashi_exact_ball(dom, center, w) < r ? 1 : 0;
    } else {
      const double k = metrics::kobayashi_proxy(dom, center, w);
      if (k + c_bb < r)
        state[i] = 1;
      else if (k - c_bb <= r)
        state[i] = 2;
    }
  });

  const double w_full = vol_box / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (state[i] == 0) continue;
    out.points.push_back(pts[i]);
    const double w = state[i] == 1 ? w_full : 0.5 * w_full;
    out.weights.push_back(w);
    out.volume += w;
    if (state[i] == 2) out.uncertain_mass += w;
  }
  return out;
}

cxd ball_average(const Domain& dom, const Cn& center, double r,
                 const std::function<cxd(const Cn&)>& f, std::size_t n,
                 std::uint64_t seed) {
  const BallQuad q = kobayashi_ball_quad(dom, center, r, n, seed);
  if (q.points.size() < 8 || q.volume <= 0)
    throw std::runtime_error("ball_average: starved Kobayashi ball");
  std::vector<double> re(q.points.size()), im(q.points.size());
  par::parallel_for(q.points.size(), [&](std::size_t i) {
    const cxd v = q.weights[i] * f(q.points[i]);
    re[i] = v.real();
    im[i] = v.imag();
  });
  return cxd{par::kahan_sum(re), par::kahan_sum(im)} / q.volume;
}

NormalizedKernel make_normalized_kernel(const SampleCloud& cloud, const Cn& z,
                                        std::size_t n_near,
                                        std::uint64_t seed) {
  NormalizedKernel k;
  k.dom = &cloud.domain();
  k.z = z;
  k.quad = make_peaked_quad(cloud, z, n_near, seed);
  k.s_l2_sq = quad_sum(k.quad, [&](const Cn& w) {
                const double s = peaking_eval(*k.dom, z, 2.0, w);
                return s * s;
              }).value;
  if (k.s_l2_sq <= 0)
    throw std::runtime_error("make_normalized_kernel: vanishing L2 mass");
  return k;
}

cxd berezin_average(const NormalizedKernel& k,
                    const std::function<cxd(const Cn&)>& f) {
  const auto& q = k.quad;
  std::vector<double> re(q.points.size()), im(q.points.size());
  par::parallel_for(q.points.size(), [&](std::size_t i) {
    const double s = peaking_eval(*k.dom, k.z, 2.0, q.points[i]);
    const cxd v = q.weights[i] * s * s * f(q.points[i]);
    re[i] = v.real();
    im[i] = v.imag();
  });
  return cxd{par::kahan_sum(re), par::kahan_sum(im)} / k.s_l2_sq;
}

double berezin_weighted_integral(const NormalizedKernel& k,
                                 const std::function<double(const Cn&)>& f) {
  const auto& q = k.quad;
  std::vector<double> buf(q.points.size());
  par::parallel_for(q.points.size(), [&](std::size_t i) {
    const double s = peaking_eval(*k.dom, k.z, 2.0, q.points[i]);
    buf[i] = q.weights[i] * s * s * f(q.points[i]);
  });
  return par::kahan_sum(buf) / k.s_l2_sq;
}

Integral peaking_lp_norm(const SampleCloud& cloud, const Cn& z, double p,
                         std::size_t n_near, std::uint64_t seed) {
  const Domain& dom = cloud.domain();
  Integral I = integrate_peaked(
      cloud, z,
      [&](const Cn& w) { return std::pow(peaking_eval(dom, z, p, w), p); },
      32.0, n_near, seed);
  Integral out;
  out.value = std::pow(I.value, 1.0 / p);
  out.se = I.value > 0 ? out.value * I.se / (p * I.value) : 0.0;
  return out;
}

}  // namespace splab::berezin
