#include "doctest.h"


#include <Eigen/Dense>
#include <cmath>

#include "splab/core/rng.hpp"
#include "splab/core/stats.hpp"
#include "splab/metrics/metrics.hpp"
#include "splab/oscillation/bmo.hpp"

using namespace splab;
using namespace splab::oscillation;

namespace {

std::shared_ptr<const Domain> disk() {
  static auto dom = make_ball(1);
  return dom;
}

const dyadic::DyadicSystem& disk_system() {
  static const auto grid = [] {
    dyadic::GridConfig cfg;
    cfg.delta_cal = 0.8;
    cfg.levels = 5;
    cfg.dense_global = 80000;
    cfg.net_candidates = 40000;
    cfg.seed = 71;
    return dyadic::build_grid(make_ball(1), cfg);
  }();
  static const auto sys = dyadic::build_tents_kubes(grid, 2000, 5);
  return sys;
}

const std::vector<Cn>& centers3() {
  static const auto c = stratified_centers(*disk(), 1e-4, 1e-1, 16, 73);
  return c;
}

}  // namespace

TEST_CASE("constant symbols have zero oscillation in all three functionals") {
  Symbol c;
  c.id = "const";
  c.cls = SymbolClass::bounded_smooth;
  c.eval = [](const Cn&) { return cxd{4.2, 0.0}; };

  const auto kob = bmo_kobayashi(*disk(), c, 1.0, 2.0, centers3(), 1024, 3);
  CHECK(kob.sup_value <= 1e-12);  // round-off only

  std::vector<const dyadic::DyadicSystem*> systems{&disk_system()};
  const auto dy = bmo_dyadic(systems, c, 2.0, 256, 5);
  CHECK(dy.sup_value <= 1e-12);

  const auto cloud = sample_interior(disk(), 40000, 10, 7);
  const auto bz = bmo_berezin(cloud, c, 2.0,
                              {centers3()[0], centers3()[20]}, 8192, 9);
  CHECK(bz.sup_value < 1e-10);
}

TEST_CASE("log delta is BMO flat; capped delta power diverges with slope") {
  auto logd = make_symbol(disk(), "logdelta", 1e-6);
  const auto rep = bmo_kobayashi(*disk(), logd, 1.0, 2.0, centers3(), 2048, 11);
  REQUIRE(rep.starved == 0);
  double vmin = 1e300, vmax = 0.0;
  for (const auto& cc : rep.centers) {
    vmin = std::min(vmin, cc.value);
    vmax = std::max(vmax, cc.value);
  }
  CHECK(vmax / vmin <= 2.0);
  MESSAGE("log delta curve band: [", vmin, ", ", vmax, "]");

  auto pow_sym = make_symbol(disk(), "deltapow", 1e-4, -0.3);
  const auto prep = bmo_kobayashi(*disk(), pow_sym, 1.0, 2.0, centers3(), 2048, 13);
  std::vector<double> lx, ly;
  for (const auto& cc : prep.centers) {
    if (cc.delta < 1e-3) continue;  // clear of the cap
    lx.push_back(std::log(cc.delta));
    ly.push_back(std::log(std::max(cc.value, 1e-300)));
  }
  const auto fit = fit_line(lx, ly);
  CHECK(fit.slope == doctest::Approx(-0.3).epsilon(0.17));
  MESSAGE("delta power oscillation slope: ", fit.slope);
}

TEST_CASE("dyadic oscillation: stability under adding grids") {
  auto logd = make_symbol(disk(), "logdelta", 1e-6);
  dyadic::GridConfig cfg;
  cfg.delta_cal = 0.8;
  cfg.levels = 4;
  cfg.dense_global = 50000;
  cfg.net_candidates = 25000;
  cfg.seed = 83;
  const auto grids = dyadic::build_adjacent_grids(disk(), cfg, 2);
  const auto sys0 = dyadic::build_tents_kubes(grids[0], 2000, 5);
  const auto sys1 = dyadic::build_tents_kubes(grids[1], 2000, 5);

  std::vector<const dyadic::DyadicSystem*> one{&sys0};
  std::vector<const dyadic::DyadicSystem*> two{&sys0, &sys1};
  const auto r1 = bmo_dyadic(one, logd, 2.0, 512, 15);
  const auto r2 = bmo_dyadic(two, logd, 2.0, 512, 15);
  CHECK(r1.sup_value > 0.0);
  CHECK(r2.sup_value >= r1.sup_value);           // sup over a superset
  CHECK(r2.sup_value <= 1.15 * r1.sup_value);    // stable within 15%
  MESSAGE("dyadic sup: one grid ", r1.sup_value, ", two grids ", r2.sup_value);
}

TEST_CASE("berezin oscillation is consistent with the kobayashi one") {
  const auto cloud = sample_interior(disk(), 60000, 12, 17);
  auto logd = make_symbol(disk(), "logdelta", 1e-6);
  std::vector<Cn> centers;
  for (int i = 0; i < 48; i += 6) centers.push_back(centers3()[i]);

  const auto kb = bmo_kobayashi(*disk(), logd, 1.0, 2.0, centers, 2048, 19);
  const auto bz = bmo_berezin(cloud, logd, 2.0, centers, 12288, 21);
  REQUIRE(kb.sup_value > 0);
  REQUIRE(bz.sup_value > 0);
  const double ratio = bz.sup_value / kb.sup_value;
  CHECK(ratio > 1.0 / 50.0);
  CHECK(ratio < 50.0);
  MESSAGE("berezin/kobayashi sup ratio: ", ratio);

  auto pow_sym = make_symbol(disk(), "deltapow", 1e-4, -0.3);
  const auto pb = bmo_berezin(cloud, pow_sym, 2.0, centers, 12288, 23);
  std::vector<double> lx, ly;
  for (const auto& cc : pb.centers) {
    if (cc.delta < 1e-3) continue;
    lx.push_back(std::log(cc.delta));
    ly.push_back(std::log(std::max(cc.value, 1e-300)));
  }
  const auto fit = fit_line(lx, ly);
  CHECK(fit.slope < -0.1);  // same divergence sign as the kobayashi curve
  MESSAGE("berezin delta-power slope: ", fit.slope);
}

TEST_CASE("vmo profiles classify the family consistently") {
  auto cs = make_symbol(disk(), "compact_support", 1e-6);
  auto logd = make_symbol(disk(), "logdelta", 1e-6);

  const auto rep_cs = bmo_kobayashi(*disk(), cs, 1.0, 2.0, centers3(), 2048, 25);
  const auto prof_cs = vmo_profile(rep_cs);
  CHECK(prof_cs.vmo);

  const auto rep_ld = bmo_kobayashi(*disk(), logd, 1.0, 2.0, centers3(), 2048, 27);
  const auto prof_ld = vmo_profile(rep_ld);
  CHECK_FALSE(prof_ld.vmo);

  // dyadic per-tent curve enters the same classifier through tent heights
  std::vector<const dyadic::DyadicSystem*> systems{&disk_system()};
  const auto dy_cs = bmo_dyadic(systems, cs, 2.0, 512, 29);
  const auto dy_ld = bmo_dyadic(systems, logd, 2.0, 512, 29);
  CHECK(vmo_profile(dy_cs).vmo);
  CHECK_FALSE(vmo_profile(dy_ld).vmo);
}

TEST_CASE("homogeneity and p-monotonicity of the functionals") {
  auto logd = make_symbol(disk(), "logdelta", 1e-6);
  std::vector<Cn> centers(centers3().begin(), centers3().begin() + 12);

  Symbol scaled = logd;
  scaled.eval = [&](const Cn& z) { return 3.0 * logd.eval(z); };
  Symbol shifted = logd;
  shifted.eval = [&](const Cn& z) { return logd.eval(z) + cxd{7.0, 0.0}; };

  const auto base = bmo_kobayashi(*disk(), logd, 1.0, 2.0, centers, 2048, 31);
  const auto tri = bmo_kobayashi(*disk(), scaled, 1.0, 2.0, centers, 2048, 31);
  const auto shf = bmo_kobayashi(*disk(), shifted, 1.0, 2.0, centers, 2048, 31);
  CHECK(tri.sup_value == doctest::Approx(3.0 * base.sup_value).epsilon(1e-9));
  CHECK(shf.sup_value == doctest::Approx(base.sup_value).epsilon(1e-9));

  const auto p1 = bmo_kobayashi(*disk(), logd, 1.0, 1.0, centers, 2048, 31);
  CHECK(p1.sup_value <= base.sup_value * (1 + 1e-9));  // Holder monotonicity

  // radius robustness: r vs 2r within a bounded factor
  const auto r2 = bmo_kobayashi(*disk(), logd, 2.0, 2.0, centers, 2048, 31);
  const double rr = r2.sup_value / base.sup_value;
  CHECK(rr > 0.2);
  CHECK(rr < 5.0);
  MESSAGE("r-robustness ratio BMO_2r/BMO_r: ", rr);
}

TEST_CASE("bda2: holomorphic polynomials are at zero distance") {
  Symbol holo;
  holo.id = "w1sq";
  holo.cls = SymbolClass::bounded_smooth;
  holo.eval = [](const Cn& w) { return w[0] * w[0]; };
  const Cn z = centers3()[4];
  const auto res = bda2_distance(*disk(), holo, z, 1.0, 3, 4096, 5);
  CHECK(res.value < 1e-8);
  CHECK(res.degree == 3);
}

TEST_CASE("bda2 decreases in degree and matches a brute-force oracle") {
  auto conj1 = make_symbol(disk(), "conjz1", 1e-6);
  const Cn z = centers3()[10];

  double prev = 1e300;
  for (int deg = 0; deg <= 4; ++deg) {
    const auto res = bda2_distance(*disk(), conj1, z, 1.0, deg, 4096, 7);
    CHECK(res.value <= prev * (1 + 1e-9));
    prev = res.value;
  }

  // oracle: independent dense quadrature + normal equations
  const auto res = bda2_distance(*disk(), conj1, z, 1.0, 3, 8192, 9);
  {
    const auto q = berezin::kobayashi_ball_quad(*disk(), z, 1.0, 30000, 991);
    REQUIRE(q.points.size() > 1000);
    // monomials 1, w, w^2, w^3 about z scaled by the ball spread
    double scale = 1e-12;
    for (const auto& w : q.points) scale = std::max(scale, std::abs(w[0] - z[0]));
    const int M = 4;
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(M, M);
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(M);
    double bb = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      std::array<cxd, 4> phi;
      phi[0] = cxd{1.0, 0.0};
      const cxd u = (q.points[i][0] - z[0]) / scale;
      for (int m = 1; m < M; ++m) phi[m] = phi[m - 1] * u;
      const cxd bval = std::conj(q.points[i][0]);
      for (int a = 0; a < M; ++a) {
        for (int b2 = 0; b2 < M; ++b2)
          G(a, b2) += q.weights[i] * std::conj(phi[a]) * phi[b2];
        d(a) += q.weights[i] * std::conj(phi[a]) * bval;
      }
      bb += q.weights[i] * std::norm(bval);
    }
    const Eigen::VectorXcd coef = G.ldlt().solve(d);
    const double res2 = std::max(0.0, bb - (d.adjoint() * coef)(0, 0).real());
    const double oracle = std::sqrt(res2 / q.volume);
    CHECK(res.value == doctest::Approx(oracle).epsilon(0.1));
    MESSAGE("bda2 ", res.value, " vs oracle ", oracle);
  }
}

TEST_CASE("bmo is sandwiched by the two-sided bda distance") {
  auto conj1 = make_symbol(disk(), "conjz1", 1e-6);
  Symbol conj_conj = conj1;
  conj_conj.eval = [&](const Cn& w) { return std::conj(conj1.eval(w)); };

  std::vector<Cn> centers(centers3().begin(), centers3().begin() + 10);
  const auto rep = bmo_kobayashi(*disk(), conj1, 1.0, 2.0, centers, 4096, 11);
  double worst = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto a = bda2_distance(*disk(), conj1, centers[i], 1.0, 4, 4096, 13 + i);
    const auto b = bda2_distance(*disk(), conj_conj, centers[i], 1.0, 4, 4096, 17 + i);
    const double denom = a.value + b.value;
    if (denom > 1e-12)
      worst = std::max(worst, rep.centers[i].value / denom);
  }
  CHECK(worst > 0.0);
  CHECK(worst < 20.0);
  MESSAGE("bmo <= C (bda + conj bda): fitted C = ", worst);
}
