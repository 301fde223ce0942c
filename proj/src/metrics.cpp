#include "splab/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "splab/core/parallel.hpp"
#include "splab/core/rng.hpp"

namespace splab::metrics {

double chi_cutoff(double t, double mu) {
  const double half = 0.5 * mu;
  if (t <= half) return 1.0;
  if (t >= mu) return 0.0;
  const double u = (t - half) / half;
  return 1.0 - (10.0 * u * u * u - 15.0 * u * u * u * u + 6.0 * u * u * u * u * u);
}

double boundary_quasidist(const Domain& dom, const Cn& zeta, const Cn& xi) {
  const Cn diff = zeta - xi;
  const Cn db = dom.dbar_rho(zeta);
  return std::sqrt(std::abs(hdot(db, diff)) + diff.norm2());
}

bool box_membership(const Domain& dom, const Cn& zeta, double r, const Cn& xi) {
  const Cn db = dom.dbar_rho(zeta);
  const double nn = db.norm();
  if (nn < 1e-14) throw std::invalid_argument("box_membership: degenerate gradient");
  const Cn nu = (1.0 / nn) * db;
  const Cn diff = xi - zeta;
  const cxd cN = hdot(diff, nu);
  const Cn ZN = cN * nu;
  const Cn ZH = diff - ZN;
  return std::abs(cN) < r * r && ZH.norm() < r;
}

double big_f(const Domain& dom, const Cn& z, const Cn& w) {
  const Cn diff = w - z;
  const Cn db = dom.dbar_rho(w);
  return std::abs(dom.rho(w)) + std::abs(dom.rho(z)) +
         std::abs(hdot(db, diff).imag()) + diff.norm2();
}

cxd levi_polynomial(const Domain& dom, const Cn& w, const Cn& z,
                    std::optional<double> eps) {
  const DefiningEval e = dom.eval(w);
  const CMat M = eps ? dom.tau(w, *eps) : e.holomorphic;
  cxd p{0.0, 0.0};
  for (int j = 0; j < dom.dim(); ++j) {
    const cxd dj = z[j] - w[j];
    p += e.dz[j] * dj;
    for (int k = 0; k < dom.dim(); ++k) p += 0.5 * M(j, k) * dj * (z[k] - w[k]);
  }
  return p;
}

cxd levi_g(const Domain& dom, const Cn& w, const Cn& z,
           std::optional<double> eps) {
  const double t = (w - z).norm2();
  const double c = dom.global_levi_chart() ? 1.0 : chi_cutoff(t, dom.mu());
  cxd g = cxd{-dom.rho(w), 0.0};
  if (c > 0.0) g -= c * levi_polynomial(dom, w, z, eps);
  if (c < 1.0) g += (1.0 - c) * t;
  return g;
}

double calibrate_mu(const Domain& dom, int n_pairs, std::uint64_t seed,
                    double c_floor) {
  if (dom.global_levi_chart()) return dom.mu();

  // Interior rejection sample, once.
  std::vector<Cn> pts;
  Rng rng(seed);
  const double R = dom.bounding_radius();
  while (static_cast<int>(pts.size()) < n_pairs) {
    Cn z(dom.dim());
    for (int j = 0; j < dom.dim(); ++j)
      z[j] = cxd{rng.uniform(-R, R), rng.uniform(-R, R)};
    if (dom.rho(z) < 0) pts.push_back(z);
  }

  const double diam2 = 4.0 * R * R;
  double best = 0.0;
  for (double mu = diam2; mu > 1e-4; mu *= 0.5) {
    bool ok = true;
    for (std::size_t i = 0; i + 1 < pts.size() && ok; i += 2) {
      const Cn& w = pts[i];
      // Pull the partner toward w so near-diagonal pairs are exercised.
      Cn z = pts[i + 1];
      const double lam = rng.uniform();
      for (int j = 0; j < dom.dim(); ++j) z[j] = w[j] + lam * (z[j] - w[j]);
      if (dom.rho(z) >= 0) continue;
      if ((w - z).norm2() > mu) continue;
      const double t = (w - z).norm2();
      const double c = chi_cutoff(t, mu);
      cxd g = cxd{-dom.rho(w), 0.0};
      if (c > 0.0) g -= c * levi_polynomial(dom, w, z);
      if (c < 1.0) g += (1.0 - c) * t;
      if (g.real() < c_floor * big_f(dom, z, w)) ok = false;
    }
    if (ok) {
      best = mu;
      break;
    }
  }
  return best > 0 ? best : 1e-4;
}

// ------------------------------------------------------------------ Kobayashi

double kobayashi_proxy(const Domain& dom, const Cn& pi_z, double delta_z,
                       const Cn& pi_w, double delta_w, bool same_point) {
  if (same_point) return 0.0;
  const double db = boundary_quasidist(dom, pi_z, pi_w);
  const double num = db + std::sqrt(std::max(delta_z, delta_w));
  const double den = std::pow(delta_z * delta_w, 0.25);
  return 2.0 * std::log(num / den);
}

double kobayashi_proxy(const Domain& dom, const Cn& z, const Cn& w) {
  bool same = true;
  for (int j = 0; j < dom.dim(); ++j)
    if (z[j] != w[j]) {
      same = false;
      break;
    }
  if (same) return 0.0;
  const Projection pz = boundary_project(dom, z);
  const Projection pw = boundary_project(dom, w);
  return kobayashi_proxy(dom, pz.pi, pz.delta, pw.pi, pw.delta, false);
}

Cn ball_automorphism(const Cn& a, const Cn& w) {
  const double a2 = a.norm2();
  if (a2 < 1e-28) {
    Cn out = w;
    out *= -1.0;
    return out;
  }
  const cxd wa = hdot(w, a);
  const double s = std::sqrt(std::max(0.0, 1.0 - a2));
  const Cn Pw = (wa / a2) * a;
  const Cn Qw = w - Pw;
  Cn num = a - Pw - s * Qw;
  num *= 1.0 / (cxd{1.0, 0.0} - wa);
  return num;
}

double kobayashi_exact_ball(const Domain& dom, const Cn& z, const Cn& w) {
  if (!dom.has_exact_kobayashi())
    throw std::invalid_argument("kobayashi_exact_ball: no oracle on " + dom.name());
  const double m = ball_automorphism(z, w).norm();
  return std::atanh(std::min(m, 1.0 - 1e-16));
}

Membership kobayashi_ball_membership(const Domain& dom,
                                     const KobayashiBallSpec& spec,
                                     const Cn& w) {
  if (spec.exact) {
    return kobayashi_exact_ball(dom, spec.center, w) < spec.radius
               ? Membership::inside
               : Membership::outside;
  }
  const double k = kobayashi_proxy(dom, spec.center, w);
  if (k + spec.c_bb < spec.radius) return Membership::inside;
  if (k - spec.c_bb > spec.radius) return Membership::outside;
  return Membership::uncertain;
}

// ------------------------------------------------------------------- polydisk

NormalFrame normal_frame(const Domain& dom, const Cn& z) {
  const Projection p = boundary_project(dom, z);
  const Cn db = dom.dbar_rho(p.pi);
  const double nn = db.norm();
  if (nn < 1e-14) throw std::runtime_error("normal_frame: degenerate gradient");
  NormalFrame f;
  f.base = p.pi;
  f.n = dom.dim();
  f.axes[0] = (1.0 / nn) * db;
  // Gram-Schmidt over the standard basis for the tangential axes.
  int filled = 1;
  for (int cand = 0; cand < dom.dim() && filled < dom.dim(); ++cand) {
    Cn v(dom.dim());
    v[cand] = cxd{1.0, 0.0};
    for (int j = 0; j < filled; ++j) v -= hdot(v, f.axes[j]) * f.axes[j];
    const double vn = v.norm();
    if (vn > 1e-8) {
      v *= 1.0 / vn;
      f.axes[filled++] = v;
    }
  }
  if (filled != dom.dim()) throw std::runtime_error("normal_frame: frame construction failure");
  return f;
}

bool polydisk_membership(const Domain& dom, const Cn& z, double r, const Cn& w) {
  const NormalFrame f = normal_frame(dom, z);
  const Cn diff = w - z;
  if (std::abs(hdot(diff, f.axes[0])) >= r) return false;
  const double rt = std::sqrt(r);
  for (int j = 1; j < f.n; ++j)
    if (std::abs(hdot(diff, f.axes[j])) >= rt) return false;
  return true;
}

double polydisk_size(const Domain& dom, const Cn& z, const Cn& w) {
  const NormalFrame f = normal_frame(dom, z);
  const double delta = boundary_project(dom, z).delta;
  const Cn diff = w - z;
  double lam = std::abs(hdot(diff, f.axes[0])) / delta;
  for (int j = 1; j < f.n; ++j) {
    const double c = std::abs(hdot(diff, f.axes[j]));
    lam = std::max(lam, c * c / delta);
  }
  return lam;
}

}  // namespace splab::metrics
