#include "doctest.h"

#include <cmath>

#include "splab/berezin/berezin.hpp"
#include "splab/berezin/peaking.hpp"
#include "splab/core/rng.hpp"
#include "splab/metrics/metrics.hpp"
#include "splab/oscillation/bmo.hpp"
#include "splab/sampling/rf.hpp"

using namespace splab;
namespace bz = splab::berezin;
namespace mt = splab::metrics;

namespace {

std::shared_ptr<const Domain> ball2() {
  static auto dom = make_ball(2);
  return dom;
}

const SampleCloud& cloud2() {
  static const SampleCloud c = sample_interior(ball2(), 120000, 12, 91);
  return c;
}

Cn center_at(double delta, std::uint64_t seed) {
  Rng rng(seed);
  const Cn u = rng.sphere_dir(2);
  return (1.0 - delta) * u;
}

}  // namespace

TEST_CASE("peaking kernel closed form at the origin") {
  const Cn z0(2);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    Cn w = rng.sphere_dir(2);
    w *= rng.uniform() * 0.99;
    CHECK(bz::peaking_eval(*ball2(), z0, 2.0, w) == doctest::Approx(1.0));
  }
}

TEST_CASE("kobayashi ball quadrature reproduces the volume law") {
  // |E(z,r)| / delta^{n+1} constant within 15% across decades
  const double r = 1.0;
  double ratio_min = 1e300, ratio_max = 0.0;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    const Cn z = center_at(delta, 17);
    const auto q = bz::kobayashi_ball_quad(*ball2(), z, r, 40000, 3);
    const double ratio = q.volume / std::pow(delta, 3.0);
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
    MESSAGE("delta ", delta, ": |E|/delta^3 = ", ratio);
  }
  CHECK(ratio_max / ratio_min < 1.0 / 0.85);
}

TEST_CASE("peaking L2 norms stay in a bounded band") {
  double mn = 1e300, mx = 0.0;
  int idx = 0;
  for (double expn = -1.0; expn >= -3.01; expn -= 0.5) {
    const double delta = std::pow(10.0, expn);
    const Cn z = center_at(delta, 23 + idx++);
    const auto norm = bz::peaking_lp_norm(cloud2(), z, 2.0, 16384, 7 + idx);
    mn = std::min(mn, norm.value);
    mx = std::max(mx, norm.value);
    MESSAGE("delta ", delta, " ||S_z||_2 = ", norm.value, " +- ", norm.se);
  }
  CHECK(mx / mn <= 20.0);
}

TEST_CASE("fully normalized kernel bounds the reciprocal ball measure") {
  double c1_min = 1e300, c1_max = 0.0;
  int idx = 0;
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    const Cn z = center_at(delta, 31 + idx++);
    const auto kernel = bz::make_normalized_kernel(cloud2(), z, 16384, 11);
    const auto q = bz::kobayashi_ball_quad(*ball2(), z, 1.0, 4000, 13);
    REQUIRE(q.points.size() > 100);
    double min_s2 = 1e300;
    for (const auto& w : q.points) {
      const double s = bz::peaking_eval(*ball2(), z, 2.0, w);
      min_s2 = std::min(min_s2, s * s / kernel.s_l2_sq);
    }
    const double c1 = min_s2 * q.volume;
    c1_min = std::min(c1_min, c1);
    c1_max = std::max(c1_max, c1);
    MESSAGE("delta ", delta, ": fitted C_1 = ", c1);
  }
  CHECK(c1_min > 0.0);
  CHECK(c1_max / c1_min < 25.0);
}

TEST_CASE("modified berezin transform") {
  const Cn z = center_at(0.03, 41);
  const auto kernel = bz::make_normalized_kernel(cloud2(), z, 16384, 17);

  SUBCASE("constants are reproduced exactly") {
    const cxd v = bz::modified_berezin(kernel, [](const Cn&) { return cxd{3.0, 0.0}; });
    CHECK(v.real() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(v.imag() == 0.0);
  }
  SUBCASE("indicator of the unit kobayashi ball has mass in (0, 1]") {
    const cxd v = bz::modified_berezin(kernel, [&](const Cn& w) {
      return cxd{mt::kobayashi_exact_ball(*ball2(), z, w) < 1.0 ? 1.0 : 0.0, 0.0};
    });
    CHECK(v.real() > 0.0);
    CHECK(v.real() <= 1.0);
    MESSAGE("peak mass in E(z,1): ", v.real());
  }
  SUBCASE("log delta tracks its own center value across decades") {
    int idx = 0;
    for (double delta : {1e-1, 1e-2, 1e-3}) {
      const Cn zc = center_at(delta, 43 + idx++);
      const auto k2 = bz::make_normalized_kernel(cloud2(), zc, 16384, 19);
      const cxd v = bz::modified_berezin(k2, [&](const Cn& w) {
        return cxd{std::log(boundary_distance(*ball2(), w)), 0.0};
      });
      CHECK(std::abs(v.real() - std::log(delta)) < 2.5);
      MESSAGE("delta ", delta, ": btilde - log delta = ",
              v.real() - std::log(delta));
    }
  }
}

TEST_CASE("dyadic berezin field") {
  dyadic::GridConfig cfg;
  cfg.delta_cal = 0.8;
  cfg.levels = 5;
  cfg.dense_global = 80000;
  cfg.net_candidates = 40000;
  cfg.seed = 47;
  static const auto grid = dyadic::build_grid(make_ball(1), cfg);
  static const auto sys = dyadic::build_tents_kubes(grid, 2000, 5);
  auto dom = make_ball(1);

  SUBCASE("constant symbols give a constant field exactly") {
    const auto field = bz::dyadic_berezin(
        sys, [](const Cn&) { return cxd{2.5, 0.0}; }, 256, 1);
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      Cn z{cxd{rng.uniform(-1, 1), rng.uniform(-1, 1)}};
      if (dom->rho(z) >= -1e-9) continue;
      const auto ev = field.eval(z);
      if (!ev.usable) continue;
      CHECK(ev.value.real() == doctest::Approx(2.5).epsilon(1e-12));
    }
  }

  SUBCASE("log delta: neighbor steps, growth law, kobayashi lipschitz") {
    auto logdelta = [&](const Cn& w) {
      return cxd{std::log(boundary_distance(*dom, w)), 0.0};
    };
    const auto field = bz::dyadic_berezin(sys, logdelta, 512, 2);

    // neighbor-step bound: |<b>_parent - <b>_child| <= C * BMO estimate
    const auto centers = oscillation::stratified_centers(*dom, 1e-3, 1e-1, 10, 5);
    const auto bmo = oscillation::bmo_kobayashi(
        *dom, oscillation::make_symbol(dom, "logdelta", 1e-6), sys.beta(), 2.0,
        centers, 2048, 7);
    REQUIRE(bmo.sup_value > 0);
    double worst_step = 0.0;
    const auto& g = sys.grid();
    for (int k = 0; k + 1 <= g.deepest_level(); ++k) {
      const auto& lev = g.level(k);
      for (std::size_t j = 0; j < lev.net.size(); ++j) {
        if (j >= lev.children.size()) continue;
        const dyadic::KubeId pid{k, static_cast<int>(j)};
        if (!field.usable(pid)) continue;
        for (int c : lev.children[j]) {
          const dyadic::KubeId cid{k + 1, c};
          if (!field.usable(cid)) continue;
          worst_step = std::max(
              worst_step, std::abs(field.value(pid) - field.value(cid)));
        }
      }
    }
    const double c_step = worst_step / bmo.sup_value;
    CHECK(c_step < 20.0);
    MESSAGE("neighbor step constant: ", c_step);

    // growth law: max |field| at level k <= C (k+1), C fitted on low levels
    std::vector<double> level_max(g.deepest_level() + 1, 0.0);
    for (int k = 0; k <= g.deepest_level(); ++k)
      for (std::size_t j = 0; j < g.level(k).net.size(); ++j) {
        const dyadic::KubeId id{k, static_cast<int>(j)};
        if (field.usable(id))
          level_max[k] = std::max(level_max[k], std::abs(field.value(id)));
      }
    const double c_growth = std::max(level_max[0], level_max[1] / 2.0);
    for (int k = 0; k <= g.deepest_level(); ++k) {
      CHECK(level_max[k] <= 2.5 * c_growth * (k + 1));
      MESSAGE("level ", k, " max |field| = ", level_max[k]);
    }

    // lipschitz in the kobayashi metric
    Rng rng(9);
    std::vector<double> ratios;
    for (int t = 0; t < 4000; ++t) {
      Cn z{cxd{rng.uniform(-1, 1), rng.uniform(-1, 1)}};
      Cn w{cxd{rng.uniform(-1, 1), rng.uniform(-1, 1)}};
      if (dom->rho(z) >= -1e-9 || dom->rho(w) >= -1e-9) continue;
      const auto ez = field.eval(z);
      const auto ew = field.eval(w);
      if (!ez.usable || !ew.usable) continue;
      const double dk = mt::kobayashi_exact_ball(*dom, z, w);
      ratios.push_back(std::abs(ez.value - ew.value) /
                       (bmo.sup_value * std::max(1.0, dk)));
    }
    REQUIRE(ratios.size() > 500);
    const double c_lip = quantile(ratios, 0.99);
    const double c_med = quantile(ratios, 0.5);
    CHECK(c_lip < 50.0 * std::max(c_med, 0.02));
    MESSAGE("lipschitz constant p99: ", c_lip, " (median ", c_med, ")");
  }
}

TEST_CASE("carleson ratio for log delta against peaking test functions") {
  dyadic::GridConfig cfg;
  cfg.delta_cal = 0.8;
  cfg.levels = 4;
  cfg.dense_global = 60000;
  cfg.net_candidates = 30000;
  cfg.seed = 53;
  auto dom = make_ball(1);
  const auto grid = dyadic::build_grid(dom, cfg);
  const auto sys = dyadic::build_tents_kubes(grid, 2000, 5);
  auto logdelta = [&](const Cn& w) {
    return cxd{std::log(boundary_distance(*dom, w)), 0.0};
  };
  const auto field = bz::dyadic_berezin(sys, logdelta, 512, 3);
  const auto cloud = sample_interior(dom, 60000, 10, 55);

  double first = 0.0, last = 0.0;
  int idx = 0;
  for (double delta : {3e-2, 3e-3}) {
    const Cn zeta = center_at(delta, 61 + idx);
    Cn zeta1(1);
    zeta1[0] = zeta[0];  // reuse direction machinery in C^1
    zeta1[0] = (1.0 - delta) * (zeta1[0] / std::abs(zeta1[0]));
    auto f2 = [&](const Cn& w) {
      const double s = bz::peaking_eval(*dom, zeta1, 2.0, w);
      return s * s;
    };
    const auto num = integrate_peaked(cloud, zeta1, [&](const Cn& w) {
      const auto ev = field.eval(w);
      if (!ev.usable) return 0.0;
      const double diff = std::abs(logdelta(w) - ev.value);
      return f2(w) * diff * diff;
    });
    const auto den = integrate_peaked(cloud, zeta1, f2);
    const double ratio = num.value / den.value;
    if (idx == 0) first = ratio;
    last = ratio;
    ++idx;
    MESSAGE("carleson ratio at delta ", delta, ": ", ratio);
    CHECK(ratio < 50.0);
  }
  CHECK(last < 4.0 * std::max(first, 0.05));
}
