#include "doctest.h"

#include <cmath>

#include "splab/core/hashgrid.hpp"
#include "splab/core/rng.hpp"
#include "splab/domain/boundary.hpp"
#include "splab/domain/domain.hpp"

using namespace splab;

namespace {

/// Central finite difference of rho in real coordinate i at z.
double fd_real(const Domain& dom, const Cn& z, int i, double h) {
  Cn zp = z, zm = z;
  const int j = i / 2;
  const cxd dh = (i % 2 == 0) ? cxd{h, 0} : cxd{0, h};
  zp[j] += dh;
  zm[j] -= dh;
  return (dom.rho(zp) - dom.rho(zm)) / (2 * h);
}

double fd2_real(const Domain& dom, const Cn& z, int i, int k, double h) {
  Cn a = z, b = z, c = z, d = z;
  auto bump = [](Cn& q, int idx, double s) {
    q[idx / 2] += (idx % 2 == 0) ? cxd{s, 0} : cxd{0, s};
  };
  bump(a, i, h); bump(a, k, h);
  bump(b, i, h); bump(b, k, -h);
  bump(c, i, -h); bump(c, k, h);
  bump(d, i, -h); bump(d, k, -h);
  return (dom.rho(a) - dom.rho(b) - dom.rho(c) + dom.rho(d)) / (4 * h * h);
}

Cn random_interior(const Domain& dom, Rng& rng) {
  const double R = dom.bounding_radius();
  for (;;) {
    Cn z(dom.dim());
    for (int j = 0; j < dom.dim(); ++j)
      z[j] = cxd{rng.uniform(-R, R), rng.uniform(-R, R)};
    if (dom.rho(z) < -1e-6) return z;
  }
}

}  // namespace

TEST_CASE("ball defining data at the origin") {
  auto dom = make_ball(2);
  Cn z(2);
  auto e = dom->eval(z);
  CHECK(e.rho == -1.0);
  CHECK((e.dz[0] == cxd{0, 0}));
  CHECK((e.dz[1] == cxd{0, 0}));
  CHECK((e.hermitian(0, 0) == cxd{1, 0}));
  CHECK((e.hermitian(1, 1) == cxd{1, 0}));
  CHECK((e.hermitian(0, 1) == cxd{0, 0}));
  CHECK((e.holomorphic(0, 0) == cxd{0, 0}));
}

TEST_CASE("ellipsoid rho value") {
  auto dom = make_ellipsoid({1.0, 4.0});
  Cn z{cxd{0.5, 0}, cxd{0.3, 0}};
  CHECK(dom->rho(z) == doctest::Approx(-0.39).epsilon(1e-15));
}

TEST_CASE("derivatives match finite differences") {
  Rng rng(101);
  for (auto dom : {make_ball(2), make_ellipsoid({1.0, 4.0}),
                   make_perturbed_ball(2, 0.05)}) {
    const int d = 2 * dom->dim();
    for (int trial = 0; trial < 30; ++trial) {
      Cn z = random_interior(*dom, rng);
      // keep clear of the non-smooth locus Re z1 = 0 of the perturbed ball
      if (dom->name() == "perturbed_ball" && std::abs(z[0].real()) < 0.15) continue;
      const auto e = dom->eval(z);
      const auto grad = real_gradient(e, dom->dim());
      const auto hess = real_hessian(e, dom->dim());
      const double h = 1e-5;
      for (int i = 0; i < d; ++i) {
        const double fd = fd_real(*dom, z, i, h);
        CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        for (int k = 0; k < d; ++k) {
          const double fd2 = fd2_real(*dom, z, i, k, 2e-4);
          CHECK(hess[i * d + k] == doctest::Approx(fd2).epsilon(2e-5).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("perturbed ball is C2 but not C3 at the perturbation locus") {
  auto dom = make_perturbed_ball(2, 0.05);
  // Hessian stays finite approaching Re z1 = 0 ...
  for (double t : {1e-2, 1e-4, 1e-6}) {
    Cn z{cxd{t, 0.1}, cxd{0.2, 0}};
    const auto e = dom->eval(z);
    CHECK(std::abs(e.holomorphic(0, 0)) < 1.0);
  }
  // ... while the third derivative d3 rho / dx1^3 diverges like |t|^{-1/2}.
  auto third = [&](double t) {
    const double h = t * 0.25;
    auto d2 = [&](double x) {
      Cn z{cxd{x, 0.1}, cxd{0.2, 0}};
      const auto e = dom->eval(z);
      return real_hessian(e, 2)[0];  // d2/dx1^2
    };
    return (d2(t + h) - d2(t - h)) / (2 * h);
  };
  CHECK(std::abs(third(1e-6)) > 10.0 * std::abs(third(1e-2)));
}

TEST_CASE("ball projection closed forms") {
  auto dom = make_ball(2);
  auto p = boundary_project(*dom, Cn{cxd{0.5, 0}, cxd{0, 0}});
  CHECK(p.pi[0].real() == doctest::Approx(1.0));
  CHECK(std::abs(p.pi[0].imag()) < 1e-15);
  CHECK(std::abs(p.pi[1]) < 1e-15);
  CHECK(p.delta == doctest::Approx(0.5));

  auto origin = boundary_project(*dom, Cn(2));
  CHECK(origin.delta == doctest::Approx(1.0));
  CHECK(origin.far_interior);
  CHECK(std::abs(dom->rho(origin.pi)) < 1e-12);
}

TEST_CASE("ellipsoid projection matches a dense boundary oracle") {
  auto dom = make_ellipsoid({1.0, 4.0});
  auto sample = sample_boundary_global(*dom, 1000000, 5);
  HashGrid hg(2, 0.02);
  for (const auto& q : sample.points) hg.insert(q);

  Cn z{cxd{0, 0}, cxd{0.25, 0}};
  auto p = boundary_project(*dom, z);
  double od = 0;
  const std::size_t oi = hg.nearest(z, &od);
  REQUIRE(oi != HashGrid::npos);
  // refine the sample oracle locally (pure nearest-point search, no Newton)
  Cn obest = hg.point(oi);
  double alpha = 0.05;
  for (int round = 0; round < 6; ++round) {
    auto cap = sample_boundary_cap(*dom, obest, alpha, 4000, 900 + round);
    for (const auto& q : cap.points)
      if (dist(z, q) < od) {
        od = dist(z, q);
        obest = q;
      }
    alpha *= 0.3;
  }
  CHECK(std::abs(p.delta - od) < 1e-4);
  CHECK(dist(p.pi, obest) < 1e-3);
  CHECK(std::abs(dom->rho(p.pi)) < 1e-10);

  // normal alignment: z - pi parallel to grad rho(pi)
  const Cn nu = outward_normal(*dom, p.pi);
  const Cn dir = (1.0 / p.delta) * (p.pi - z);
  CHECK(rdot(nu, dir) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("projection invariants over random interior points") {
  Rng rng(77);
  for (auto dom : {make_ball(2), make_ellipsoid({1.0, 4.0}),
                   make_perturbed_ball(2, 0.05)}) {
    auto sample = sample_boundary_global(*dom, 200000, 6);
    HashGrid hg(dom->dim(), 0.03);
    for (const auto& q : sample.points) hg.insert(q);

    int checked = 0;
    while (checked < 2000) {
      Cn z = random_interior(*dom, rng);
      auto p = boundary_project(*dom, z);
      if (p.delta < 1e-4 || p.delta > 0.3) continue;
      ++checked;
      CHECK(std::abs(dom->rho(p.pi)) <= 1e-8);
      double od = 0;
      hg.nearest(z, &od);
      CHECK(p.delta <= (1.0 + 1e-6) * od);
    }
  }
}

TEST_CASE("levi form on the sphere") {
  auto dom = make_ball(2);
  Cn zeta{cxd{1, 0}, cxd{0, 0}};

  auto tangential = levi_form(*dom, zeta, Cn{cxd{0, 0}, cxd{1, 0}});
  CHECK(tangential.normal.norm() < 1e-14);
  CHECK(tangential.levi == doctest::Approx(1.0));

  auto normal = levi_form(*dom, zeta, Cn{cxd{0, 1}, cxd{0, 0}});
  CHECK(normal.horizontal.norm() < 1e-14);
  CHECK(normal.levi == doctest::Approx(0.0));

  CHECK_THROWS_AS(levi_form(*dom, Cn(2), Cn{cxd{1, 0}, cxd{0, 0}}),
                  std::invalid_argument);
}

TEST_CASE("strong pseudoconvexity sweep on the perturbed ball") {
  auto dom = make_perturbed_ball(2, 0.05);
  auto sample = sample_boundary_global(*dom, 10000, 9);
  Rng rng(13);
  double min_levi = 1e300;
  for (const auto& zeta : sample.points) {
    const Cn Z = rng.sphere_dir(2);
    const auto split = levi_form(*dom, zeta, Z, 1e-6);
    if (split.horizontal.norm() < 1e-3) continue;
    const double unit = split.levi / split.horizontal.norm2();
    min_levi = std::min(min_levi, unit);
  }
  CHECK(min_levi > 0.0);
  MESSAGE("min Levi eigenvalue estimate: ", min_levi);
}

TEST_CASE("boundary sample weights integrate the sphere area") {
  auto dom = make_ball(2);
  auto s = sample_boundary_global(*dom, 50000, 3);
  double tot = 0;
  for (double w : s.weights) tot += w;
  CHECK(tot == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-6));
  for (const auto& p : s.points) CHECK(std::abs(dom->rho(p)) < 1e-9);
}

TEST_CASE("cap sample integrates the cap area on the sphere") {
  auto dom = make_ball(2);
  const Cn anchor = unit_e1(2);
  const double alpha = 0.3;
  auto s = sample_boundary_cap(*dom, anchor, alpha, 40000, 4);
  double tot = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    tot += s.weights[i];
    CHECK(rdot((1.0 / s.points[i].norm()) * s.points[i], anchor) >=
          std::cos(alpha) - 1e-9);
  }
  CHECK(tot == doctest::Approx(cap_area(4, alpha)).epsilon(0.02));
}

TEST_CASE("normal offset jacobian specializes on the sphere") {
  auto dom = make_ball(2);
  const Cn xi = unit_e1(2);
  for (double t : {0.1, 0.3, 0.7})
    CHECK(normal_offset_jacobian(*dom, xi, t) ==
          doctest::Approx(std::pow(1 - t, 3)).epsilon(1e-10));
  const Cn z = normal_offset(*dom, xi, 0.25);
  CHECK(z.norm() == doctest::Approx(0.75));
}

TEST_CASE("mollified hessian approximates within the requested tolerance") {
  auto dom = std::make_shared<PerturbedBallDomain>(2, 0.05);
  const double eps = 1e-3;
  CHECK(dom->tau_sup_error(eps) <= eps * 1.001);
  double worst = 0.0;
  for (double t = -0.3; t <= 0.3; t += 1e-3) {
    Cn z{cxd{t, 0.2}, cxd{0.1, 0}};
    const auto exact = dom->eval(z).holomorphic;
    const auto approx = dom->tau(z, eps);
    worst = std::max(worst, std::abs(exact(0, 0) - approx(0, 0)));
  }
  CHECK(worst <= eps);
}
