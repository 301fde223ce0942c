#include "splab/domain/boundary.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "splab/core/hashgrid.hpp"
#include "splab/core/parallel.hpp"
#include "splab/core/rng.hpp"

namespace splab {

namespace {

Eigen::VectorXd to_real(const Cn& z) {
  Eigen::VectorXd v(2 * z.dim());
  for (int j = 0; j < z.dim(); ++j) {
    v[2 * j] = z[j].real();
    v[2 * j + 1] = z[j].imag();
  }
  return v;
}

Cn from_real(const Eigen::VectorXd& v) {
  Cn z(static_cast<int>(v.size() / 2));
  for (int j = 0; j < z.dim(); ++j) z[j] = cxd{v[2 * j], v[2 * j + 1]};
  return z;
}

/// Orthonormal basis of the orthogonal complement of u (unit) in R^d.
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& u) {
  const int d = static_cast<int>(u.size());
  Eigen::MatrixXd full = Eigen::MatrixXd::Identity(d, d);
  // Householder reflection mapping e1 -> u; columns 2..d then span u-perp.
  Eigen::VectorXd w = u;
  w[0] -= 1.0;
  const double wn = w.norm();
  if (wn > 1e-12) {
    w /= wn;
    full -= 2.0 * w * w.transpose();
  }
  return full.rightCols(d - 1);
}

}  // namespace

Cn outward_normal(const Domain& dom, const Cn& xi) {
  const auto grad = real_gradient(dom.eval(xi), dom.dim());
  Cn nu(dom.dim());
  double nn = 0.0;
  for (int j = 0; j < dom.dim(); ++j) {
    nu[j] = cxd{grad[2 * j], grad[2 * j + 1]};
    nn += std::norm(nu[j]);
  }
  nu *= 1.0 / std::sqrt(nn);
  return nu;
}

Cn normal_offset(const Domain& dom, const Cn& xi, double t) {
  return xi - t * outward_normal(dom, xi);
}

double normal_offset_jacobian(const Domain& dom, const Cn& xi, double t) {
  const int d = 2 * dom.dim();
  const DefiningEval e = dom.eval(xi);
  const auto grad = real_gradient(e, dom.dim());
  const auto hess = real_hessian(e, dom.dim());
  Eigen::VectorXd g(d);
  for (int i = 0; i < d; ++i) g[i] = grad[i];
  const double gn = g.norm();
  Eigen::MatrixXd H(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) H(r, c) = hess[r * d + c] / gn;
  const Eigen::MatrixXd T = complement_basis(g / gn);
  const Eigen::MatrixXd W = T.transpose() * H * T;
  return (Eigen::MatrixXd::Identity(d - 1, d - 1) - t * W).determinant();
}

double sphere_area(int d) {
  // 2 pi^{d/2} / Gamma(d/2)
  switch (d) {
    case 2: return 2.0 * M_PI;
    case 4: return 2.0 * M_PI * M_PI;
    case 6: return M_PI * M_PI * M_PI;
    default: return 2.0 * std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0);
  }
}

double cap_area(int d, double alpha) {
  // Omega_{d-1} * int_0^alpha sin^{d-2} theta dtheta, 64-panel midpoint.
  const double ring = sphere_area(d - 1 >= 2 ? d - 1 : 2) * (d == 2 ? 1.0 : 1.0);
  if (d == 2) return 2.0 * alpha;  // two arcs of length alpha
  double s = 0.0;
  const int m = 64;
  for (int i = 0; i < m; ++i) {
    const double th = alpha * (i + 0.5) / m;
    s += std::pow(std::sin(th), d - 2);
  }
  s *= alpha / m;
  return ring * s;
}

BoundarySample sample_boundary_global(const Domain& dom, std::size_t n,
                                      std::uint64_t seed) {
  const int cd = dom.dim();
  const int d = 2 * cd;
  BoundarySample out;
  out.points.resize(n);
  out.weights.resize(n);
  const double area = sphere_area(d);
  par::parallel_for(n, [&](std::size_t i) {
    Rng rng(item_seed(seed, i));
    const Cn u = rng.sphere_dir(cd);
    const double R = dom.radial_boundary_scale(u);
    const Cn xi = R * u;
    const Cn nu = outward_normal(dom, xi);
    const double cosang = rdot(u, nu);
    out.points[i] = xi;
    out.weights[i] =
        (area / static_cast<double>(n)) * std::pow(R, d - 1) / std::max(cosang, 1e-9);
  });
  return out;
}

BoundarySample sample_boundary_cap(const Domain& dom, const Cn& anchor,
                                   double alpha, std::size_t n,
                                   std::uint64_t seed) {
  const int cd = dom.dim();
  const int d = 2 * cd;
  const Eigen::VectorXd c = to_real((1.0 / anchor.norm()) * anchor);
  const Eigen::MatrixXd perp = complement_basis(c);
  const double area = cap_area(d, alpha);

  BoundarySample out;
  out.points.resize(n);
  out.weights.resize(n);
  par::parallel_for(n, [&](std::size_t i) {
    Rng rng(item_seed(seed ^ 0x5bd1e995u, i));
    // theta with density sin^{d-2} on [0, alpha] by rejection.
    double theta = 0.0;
    if (d == 2) {
      theta = rng.uniform(-alpha, alpha);
    } else {
      const double cap = std::pow(std::sin(std::min(alpha, M_PI / 2)), d - 2);
      for (;;) {
        const double t = rng.uniform(0.0, alpha);
        if (rng.uniform() * cap <= std::pow(std::sin(t), d - 2)) {
          theta = t;
          break;
        }
      }
    }
    Eigen::VectorXd u;
    if (d == 2) {
      u = std::cos(theta) * c + std::sin(theta) * perp.col(0);
    } else {
      Eigen::VectorXd v(d - 1);
      double vn = 0.0;
      do {
        for (int j = 0; j < d - 1; ++j) v[j] = rng.normal();
        vn = v.norm();
      } while (vn < 1e-12);
      v /= vn;
      u = std::cos(theta) * c + std::sin(theta) * (perp * v);
    }
    const Cn ud = from_real(u);
    const double R = dom.radial_boundary_scale(ud);
    const Cn xi = R * ud;
    const Cn nu = outward_normal(dom, xi);
    out.points[i] = xi;
    out.weights[i] = (area / static_cast<double>(n)) * std::pow(R, d - 1) /
                     std::max(rdot(ud, nu), 1e-9);
  });
  return out;
}

NearestHit nearest_boundary_brute(const Cn& z, const BoundarySample& sample) {
  NearestHit best;
  best.distance = 1e300;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double dd = dist(z, sample.points[i]);
    if (dd < best.distance) {
      best.distance = dd;
      best.point = sample.points[i];
      best.index = i;
    }
  }
  return best;
}

double max_normal_curvature(const Domain& dom, const BoundarySample& sample) {
  const int d = 2 * dom.dim();
  std::vector<double> kappa(sample.size());
  par::parallel_for(sample.size(), [&](std::size_t i) {
    const Cn& xi = sample.points[i];
    const DefiningEval e = dom.eval(xi);
    const auto grad = real_gradient(e, dom.dim());
    const auto hess = real_hessian(e, dom.dim());
    Eigen::VectorXd g(d);
    for (int r = 0; r < d; ++r) g[r] = grad[r];
    const double gn = g.norm();
    Eigen::MatrixXd H(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) H(r, c) = hess[r * d + c] / gn;
    const Eigen::MatrixXd T = complement_basis(g / gn);
    const Eigen::MatrixXd W = T.transpose() * H * T;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
    kappa[i] = es.eigenvalues().cwiseAbs().maxCoeff();
  });
  double mx = 0.0;
  for (double k : kappa) mx = std::max(mx, k);
  return mx;
}

}  // namespace splab

namespace splab {

// ----------------------------------------------------------------- projection

namespace {

Projection project_ball(const Domain& dom, const Cn& z) {
  Projection p;
  const double r = z.norm();
  if (r < 1e-12) {
    p.pi = unit_e1(dom.dim());
    p.delta = 1.0;
    p.far_interior = true;
    return p;
  }
  p.pi = (1.0 / r) * z;
  p.delta = 1.0 - r;
  p.far_interior = p.delta > dom.far_interior_delta();
  return p;
}

/// Per-domain seed index: a moderate global boundary sample in a hash grid.
/// Newton is seeded from the nearest sample point, so the iteration starts
/// in the basin of the true foot point even on anisotropic domains.
struct SeedIndex {
  BoundarySample sample;
  HashGrid grid;
  SeedIndex(const Domain& dom)
      : sample(sample_boundary_global(dom, 65536, 0x5eedULL)),
        grid(dom.dim(), 0.05 * dom.bounding_radius()) {
    for (const auto& p : sample.points) grid.insert(p);
  }
};

const SeedIndex& seed_index(const Domain& dom) {
  static std::mutex mu;
  static std::map<const Domain*, std::unique_ptr<SeedIndex>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(&dom);
  if (it == cache.end())
    it = cache.emplace(&dom, std::make_unique<SeedIndex>(dom)).first;
  return *it->second;
}

/// Sampling-only polish of a candidate foot point (used when Newton fails):
/// shrink cap resampling around the best point so far.
Cn polish_by_resampling(const Domain& dom, const Cn& z, Cn best, double alpha0) {
  double alpha = alpha0;
  for (int round = 0; round < 6; ++round) {
    const auto cap = sample_boundary_cap(dom, best, alpha, 2000,
                                         0xAB5ULL + 31 * round);
    double bd = dist(z, best);
    for (const auto& q : cap.points)
      if (dist(z, q) < bd) {
        bd = dist(z, q);
        best = q;
      }
    alpha *= 0.35;
  }
  return best;
}

}  // namespace

Projection boundary_project(const Domain& dom, const Cn& z) {
  if (dom.has_exact_projection()) return project_ball(dom, z);

  const int n = dom.dim();
  const int d = 2 * n;
  Projection p;

  const SeedIndex& idx = seed_index(dom);
  double seed_dist = 0.0;
  const std::size_t si = idx.grid.nearest(z, &seed_dist);
  Cn guess = idx.grid.point(si);

  // Newton on  [p - lambda grad rho(p) - z ; rho(p)] = 0  over (p, lambda).
  Eigen::VectorXd v(d + 1);
  for (int j = 0; j < n; ++j) {
    v[2 * j] = guess[j].real();
    v[2 * j + 1] = guess[j].imag();
  }
  {
    const auto g0 = real_gradient(dom.eval(guess), n);
    double gn = 0;
    for (int i = 0; i < d; ++i) gn += g0[i] * g0[i];
    v[d] = -seed_dist / std::sqrt(std::max(gn, 1e-30));
  }

  auto unpack = [&](const Eigen::VectorXd& u) {
    Cn q(n);
    for (int j = 0; j < n; ++j) q[j] = cxd{u[2 * j], u[2 * j + 1]};
    return q;
  };

  bool ok = false;
  for (int it = 0; it < 80; ++it) {
    const Cn q = unpack(v);
    const DefiningEval e = dom.eval(q);
    const auto grad = real_gradient(e, n);
    const auto hess = real_hessian(e, n);
    const double lambda = v[d];

    Eigen::VectorXd F(d + 1);
    for (int i = 0; i < d; ++i) {
      const double zi = (i % 2 == 0) ? z[i / 2].real() : z[i / 2].imag();
      F[i] = v[i] + lambda * grad[i] - zi;
    }
    F[d] = e.rho;

    if (F.norm() < 1e-13) {
      ok = true;
      break;
    }

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d + 1, d + 1);
    for (int i = 0; i < d; ++i) {
      for (int k = 0; k < d; ++k)
        J(i, k) = (i == k ? 1.0 : 0.0) + lambda * hess[i * d + k];
      J(i, d) = grad[i];
      J(d, i) = grad[i];
    }
    Eigen::VectorXd step = J.fullPivLu().solve(F);
    // trust region: never move further than the seed resolution per step
    const double cap = 0.1 * dom.bounding_radius();
    if (step.norm() > cap) step *= cap / step.norm();
    v -= step;
    p.iterations = it + 1;
    if (step.norm() < 1e-15) {
      ok = true;
      break;
    }
  }

  p.pi = unpack(v);
  p.delta = dist(z, p.pi);
  p.converged =
      ok && std::abs(dom.rho(p.pi)) < 1e-10 && p.delta <= seed_dist * (1 + 1e-9);
  if (!p.converged) {
    p.pi = polish_by_resampling(dom, z, guess, 0.1);
    p.delta = dist(z, p.pi);
    p.converged = std::abs(dom.rho(p.pi)) < 1e-10;
  }
  p.far_interior = p.delta > dom.far_interior_delta();
  return p;
}

double boundary_distance(const Domain& dom, const Cn& z) {
  return boundary_project(dom, z).delta;
}

}  // namespace splab
