#include "doctest.h"

#include <cmath>

#include "splab/core/rng.hpp"
#include "splab/metrics/metrics.hpp"
#include "splab/operator_lab/cf.hpp"
#include "splab/operator_lab/nystrom.hpp"
#include "splab/sampling/rf.hpp"

using namespace splab;
namespace op = splab::oplab;

TEST_CASE("cf kernel collapses to the bergman kernel on the ball") {
  auto ball = make_ball(2);
  op::CfKernel cf(ball, 1e-3);
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    Cn z = rng.sphere_dir(2);
    z *= std::sqrt(rng.uniform()) * 0.995;
    Cn w = rng.sphere_dir(2);
    w *= std::sqrt(rng.uniform()) * 0.995;
    const cxd got = cf.eval(z, w);
    const cxd expect = op::bergman_kernel_ball(*ball, z, w);
    CHECK(std::abs(got - expect) <= 1e-10 * std::abs(expect));
  }
  // z = 0: radial (constant) kernel
  const Cn z0(2);
  for (int i = 0; i < 50; ++i) {
    Cn w = rng.sphere_dir(2);
    w *= rng.uniform() * 0.9;
    CHECK(std::abs(cf.eval(z0, w) - cxd{2.0 / (M_PI * M_PI), 0.0}) < 1e-12);
  }
}

TEST_CASE("cf kernel on the disk matches the cauchy-type closed form") {
  auto disk = make_ball(1);
  op::CfKernel cf(disk, 1e-3);
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    Cn z{cxd{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)}};
    Cn w{cxd{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)}};
    if (disk->rho(z) >= -0.05 || disk->rho(w) >= -0.05) continue;
    const cxd expect = op::bergman_kernel_ball(*disk, z, w);
    CHECK(std::abs(cf.eval(z, w) - expect) <= 1e-10 * std::abs(expect));
  }
}

TEST_CASE("kernel size bound |T(z,w)| <= C / F^{n+1} on the perturbed ball") {
  auto dom = make_perturbed_ball(2, 0.05);
  op::CfKernel cf(dom, 1e-3);
  Rng rng(7);
  double worst = 0.0;
  int used = 0;
  while (used < 4000) {
    Cn z{cxd{rng.uniform(-1, 1), rng.uniform(-1, 1)},
         cxd{rng.uniform(-1, 1), rng.uniform(-1, 1)}};
    Cn w{cxd{rng.uniform(-1, 1), rng.uniform(-1, 1)},
         cxd{rng.uniform(-1, 1), rng.uniform(-1, 1)}};
    if (dom->rho(z) >= -1e-6 || dom->rho(w) >= -1e-6) continue;
    ++used;
    const double F = metrics::big_f(*dom, z, w);
    worst = std::max(worst, std::abs(cf.eval(z, w)) * std::pow(F, 3.0));
  }
  CHECK(worst < 100.0);
  MESSAGE("sup |T| F^{n+1} = ", worst);
}

TEST_CASE("calibration and reproduction of holomorphic monomials") {
  auto ball = make_ball(2);
  const auto cloud = sample_interior(ball, 100000, 12, 401);
  op::CfKernel cf(ball, 1e-3);

  std::vector<Cn> calib = delta_ladder(*ball, 3e-2, 2e-1, 2, 403);
  const auto result = op::calibrate_kappa(cf, cloud, calib, 405);
  CHECK(result.kappa == doctest::Approx(1.0).epsilon(0.02));
  CHECK(result.spread < 0.02);
  MESSAGE("kappa = ", result.kappa, ", spread ", result.spread);

  // stability across calibration clouds (+-1%)
  {
    const auto cloud2 = sample_interior(ball, 100000, 12, 501);
    op::CfKernel cf2(ball, 1e-3);
    const auto r2 = op::calibrate_kappa(cf2, cloud2, calib, 505);
    CHECK(std::abs(r2.kappa - result.kappa) / result.kappa < 0.01);
  }

  // validation on a disjoint cloud: reproduce 1, w1, w1 w2
  const auto vcloud = sample_interior(ball, 100000, 12, 407);
  Rng rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const Cn u = rng.sphere_dir(2);
    const Cn z = (1.0 - 0.05 * (trial + 1)) * u;

    const auto t_one =
        cf.apply(vcloud, z, [](const Cn&) { return cxd{1.0, 0.0}; }, 16384, 13);
    CHECK(std::abs(t_one.value - cxd{1.0, 0.0}) <= 3 * t_one.se + 0.01);

    const auto t_w1 =
        cf.apply(vcloud, z, [](const Cn& w) { return w[0]; }, 16384, 17);
    CHECK(std::abs(t_w1.value - z[0]) <= 3 * t_w1.se + 0.01);

    const auto t_w1w2 = cf.apply(
        vcloud, z, [](const Cn& w) { return w[0] * w[1]; }, 16384, 19);
    CHECK(std::abs(t_w1w2.value - z[0] * z[1]) <= 3 * t_w1w2.se + 0.01);
  }
}

TEST_CASE("kerzman-stein style residual stays at quadrature level") {
  // On the ball T^1 equals the Bergman projection analytically, so
  // ||P T f - T f|| on a dictionary is pure quadrature noise; report it.
  auto disk = make_ball(1);
  const auto cloud = sample_interior(disk, 1500, 6, 409, 5e-3);
  const auto P = op::discretize_projection(cloud, false);
  op::CfKernel cf(disk, 1e-3);

  // T f sampled on the cloud (dense kernel application)
  auto apply_T = [&](const Eigen::VectorXcd& f) {
    Eigen::VectorXcd out(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      cxd acc{0.0, 0.0};
      for (std::size_t j = 0; j < cloud.size(); ++j)
        acc += cf.eval(cloud[i].z, cloud[j].z) * f[j] * cloud[j].weight;
      out[i] = acc;
    }
    return out;
  };

  Eigen::VectorXcd f = P.sample([](const Cn& w) {
    return std::conj(w[0]) + w[0] * w[0] + cxd{0.5, 0.0};
  });
  const auto Tf = apply_T(f);
  const auto PTf = P.apply(Tf, op::Projection::Mode::raw);
  const double residual = P.norm(PTf - Tf) / std::max(P.norm(Tf), 1e-12);
  CHECK(residual < 0.05);
  MESSAGE("ball kerzman-stein residual: ", residual);
}

TEST_CASE("mollified kernel drifts from the sharp one proportionally to eps") {
  auto dom = make_perturbed_ball(2, 0.05);
  Rng rng(13);
  double drift_small = 0.0, drift_large = 0.0;
  int used = 0;
  while (used < 1500) {
    Cn z{cxd{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)},
         cxd{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)}};
    Cn w = z;
    for (int j = 0; j < 2; ++j)
      w[j] += cxd{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
    if (dom->rho(z) >= -1e-3 || dom->rho(w) >= -1e-3) continue;
    ++used;
    const cxd ga = metrics::levi_g(*dom, w, z, 1e-2);
    const cxd gb = metrics::levi_g(*dom, w, z, 1e-4);
    const cxd g0 = metrics::levi_g(*dom, w, z);
    drift_large = std::max(drift_large, std::abs(ga - g0));
    drift_small = std::max(drift_small, std::abs(gb - g0));
  }
  CHECK(drift_small < drift_large);
  CHECK(drift_large < 1e-1);
  MESSAGE("g_eps drift: eps=1e-2 -> ", drift_large, ", eps=1e-4 -> ",
          drift_small);
}
