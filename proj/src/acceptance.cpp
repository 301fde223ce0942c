#include "splab/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "splab/berezin/berezin.hpp"
#include "splab/berezin/peaking.hpp"
#include "splab/core/rng.hpp"
#include "splab/core/sha256.hpp"
#include "splab/core/stats.hpp"
#include "splab/dyadic/system.hpp"
#include "splab/metrics/metrics.hpp"
#include "splab/operator_lab/cf.hpp"
#include "splab/operator_lab/nystrom.hpp"
#include "splab/oscillation/bmo.hpp"
#include "splab/sampling/rf.hpp"

namespace splab::acceptance {

namespace {

namespace mt = splab::metrics;
namespace dy = splab::dyadic;
namespace bz = splab::berezin;
namespace osc = splab::oscillation;
namespace op = splab::oplab;

struct Lab {
  Options opt;
  std::shared_ptr<const Domain> ball2 = make_ball(2);
  std::shared_ptr<const Domain> disk = make_ball(1);

  // shared heavy structures, built on demand
  std::unique_ptr<dy::DyadicGrid> grid2;
  std::unique_ptr<dy::DyadicSystem> sys2;
  std::unique_ptr<SampleCloud> cloud2;
  std::unique_ptr<SampleCloud> disk_cloud;
  std::unique_ptr<op::Projection> disk_proj;

  std::size_t scaled(std::size_t n) const {
    return static_cast<std::size_t>(n * opt.budget);
  }

  const dy::DyadicSystem& system2() {
    if (!sys2) {
      dy::GridConfig cfg;
      cfg.s = 2.0;
      cfg.delta_cal = 0.75;
      cfg.levels = 7;
      cfg.dense_global = scaled(150000);
      cfg.net_candidates = scaled(60000);
      cfg.max_global_net = 12000;
      cfg.survey_per_level = 4;
      cfg.dense_local = scaled(16000);
      cfg.seed = opt.seed;
      grid2 = std::make_unique<dy::DyadicGrid>(dy::build_grid(ball2, cfg));
      sys2 = std::make_unique<dy::DyadicSystem>(
          dy::build_tents_kubes(*grid2, 3000, item_seed(opt.seed, 2)));
    }
    return *sys2;
  }

  const SampleCloud& ball_cloud() {
    if (!cloud2)
      cloud2 = std::make_unique<SampleCloud>(
          sample_interior(ball2, scaled(200000), 13, item_seed(opt.seed, 3)));
    return *cloud2;
  }

  const SampleCloud& dcloud() {
    if (!disk_cloud)
      disk_cloud = std::make_unique<SampleCloud>(
          sample_interior(disk, 2000, 6, item_seed(opt.seed, 4), 5e-3));
    return *disk_cloud;
  }

  const op::Projection& dproj() {
    if (!disk_proj)
      disk_proj = std::make_unique<op::Projection>(
          op::discretize_projection(dcloud(), false));
    return *disk_proj;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// --------------------------------------------------------------- criterion 1

CriterionResult c1_measure_law(Lab& lab) {
  CriterionResult r{1, "dyadic measure law (ball n=2, levels 2-7)", false, ""};
  const auto& sys = lab.system2();
  const auto fit = dy::measure_law_fit(sys, 2, 7);
  const double target = -6.0 * std::log(2.0);
  r.pass = std::abs(fit.slope - target) <= 0.10 * std::abs(target);
  r.detail = "slope " + fmt(fit.slope) + " target " + fmt(target) + " (+-10%)";
  return r;
}

// --------------------------------------------------------------- criterion 2

CriterionResult c2_bb_sandwich(Lab& lab) {
  CriterionResult r{2, "Kobayashi proxy vs exact distance (Balogh-Bonk)", false, ""};
  const Domain& dom = *lab.ball2;
  Rng rng(item_seed(lab.opt.seed, 20));
  double decade_mean[4] = {0, 0, 0, 0};
  double sup = 0.0;
  const int per_decade = static_cast<int>(2500 * lab.opt.budget);
  for (int d = 0; d < 4; ++d) {
    MeanVar mv;
    for (int i = 0; i < per_decade; ++i) {
      const double dz = std::pow(10.0, -1 - d) * rng.uniform(0.1, 1.0);
      const double dw = std::pow(10.0, -1 - d) * rng.uniform(0.1, 1.0);
      const Cn z = (1.0 - dz) * rng.sphere_dir(2);
      const Cn w = (1.0 - dw) * rng.sphere_dir(2);
      const double gap = std::abs(mt::kobayashi_proxy(dom, z, w) -
                                  mt::kobayashi_exact_ball(dom, z, w));
      mv.add(gap);
      sup = std::max(sup, gap);
    }
    decade_mean[d] = mv.mean;
  }
  double mn = 1e300, mx = 0.0;
  for (double m : decade_mean) {
    mn = std::min(mn, m);
    mx = std::max(mx, m);
  }
  r.pass = std::isfinite(sup) && mx <= 2.0 * mn;
  r.detail = "sup gap " + fmt(sup) + ", decade means " + fmt(decade_mean[0]) +
             "/" + fmt(decade_mean[1]) + "/" + fmt(decade_mean[2]) + "/" +
             fmt(decade_mean[3]);
  return r;
}

// --------------------------------------------------------------- criterion 3

CriterionResult c3_rudin_forelli(Lab& lab) {
  CriterionResult r{3, "Rudin-Forelli slopes and vanishing tail", false, ""};
  const auto& cloud = lab.ball_cloud();
  const auto centers =
      delta_ladder(*lab.ball2, 1e-4, 1e-1, 3, item_seed(lab.opt.seed, 30));
  const auto a0 = rudin_forelli_audit(cloud, 0.0, 0.5, centers);
  const auto a1 = rudin_forelli_audit(cloud, 1.0, 1.0, centers);

  const auto tail_centers =
      delta_ladder(*lab.ball2, 3e-3, 3e-2, 2, item_seed(lab.opt.seed, 31));
  double prev = 1e300;
  bool tail_ok = true;
  std::string tails;
  for (double rr : {1.0, 2.0, 3.0}) {
    const auto t = rudin_forelli_audit(cloud, 0.0, 0.5, tail_centers, rr);
    tail_ok = tail_ok && t.constant < prev;
    prev = t.constant;
    tails += fmt(t.constant) + " ";
  }
  const bool s0 = std::abs(a0.fit.slope + 0.5) <= 0.05;
  const bool s1 = std::abs(a1.fit.slope + 1.0) <= 0.10;
  r.pass = s0 && s1 && tail_ok;
  r.detail = "slopes " + fmt(a0.fit.slope) + " (target -0.5), " +
             fmt(a1.fit.slope) + " (target -1); tail constants " + tails;
  return r;
}

// --------------------------------------------------------------- criterion 4

CriterionResult c4_peaking_norms(Lab& lab) {
  CriterionResult r{4, "peaking kernel L2 normalization band", false, ""};
  const auto& cloud = lab.ball_cloud();
  Rng rng(item_seed(lab.opt.seed, 40));
  double mn = 1e300, mx = 0.0;
  int idx = 0;
  for (int d = 0; d < 3; ++d) {
    for (int i = 0; i < 4; ++i) {
      const double delta = std::pow(10.0, -1 - d) * rng.uniform(0.15, 1.0);
      const Cn z = (1.0 - delta) * rng.sphere_dir(2);
      const auto norm = bz::peaking_lp_norm(cloud, z, 2.0, 16384,
                                            item_seed(lab.opt.seed, 41 + idx++));
      mn = std::min(mn, norm.value);
      mx = std::max(mx, norm.value);
    }
  }
  r.pass = mx / mn <= 20.0;
  r.detail = "||S_z||_2 in [" + fmt(mn) + ", " + fmt(mx) + "], ratio " +
             fmt(mx / mn) + " (<= 20)";
  return r;
}

// --------------------------------------------------------------- criterion 5

CriterionResult c5_bmo_equivalence(Lab& lab) {
  CriterionResult r{5, "three-way BMO equivalence (p=2, r=3beta)", false, ""};
  const auto& sys = lab.system2();
  const auto& cloud = lab.ball_cloud();
  const double r3 = 3.0 * sys.beta();
  const auto centers = osc::stratified_centers(*lab.ball2, 1e-3, 1e-1, 12,
                                               item_seed(lab.opt.seed, 50));
  std::vector<Cn> bz_centers(centers.begin(),
                             centers.begin() + std::min<std::size_t>(18, centers.size()));
  std::vector<const dy::DyadicSystem*> systems{&sys};

  const auto family = osc::symbol_family(lab.ball2, cloud.delta_min());
  double cstar = 1.0;
  std::string rows;
  for (const auto& sym : family) {
    const auto kb = osc::bmo_kobayashi(*lab.ball2, sym, r3, 2.0, centers, 3000,
                                       item_seed(lab.opt.seed, 51));
    const auto dyr = osc::bmo_dyadic(systems, sym, 2.0, 384,
                                     item_seed(lab.opt.seed, 52));
    const auto bzr = osc::bmo_berezin(cloud, sym, 2.0, bz_centers, 12288,
                                      item_seed(lab.opt.seed, 53));
    const double vals[3] = {kb.sup_value, dyr.sup_value, bzr.sup_value};
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        if (vals[a] <= 0 || vals[b] <= 0) {
          cstar = 1e300;
          continue;
        }
        const double ratio = vals[a] / vals[b];
        cstar = std::max(cstar, std::max(ratio, 1.0 / ratio));
      }
    rows += sym.id + "(" + fmt(vals[0]) + "/" + fmt(vals[1]) + "/" +
            fmt(vals[2]) + ") ";
  }
  r.pass = cstar <= 50.0;
  r.detail = "C* = " + fmt(cstar) + " (<= 50); kob/dyadic/berezin: " + rows;
  return r;
}

// --------------------------------------------------------------- criterion 6

CriterionResult c6_vmo_classification(Lab& lab) {
  CriterionResult r{6, "VMO classification agreement", false, ""};
  const auto& sys = lab.system2();
  const auto& cloud = lab.ball_cloud();
  const auto centers = osc::stratified_centers(*lab.ball2, 1e-4, 1e-1, 10,
                                               item_seed(lab.opt.seed, 60));
  std::vector<Cn> bz_centers;
  for (std::size_t i = 0; i < centers.size(); i += 2) bz_centers.push_back(centers[i]);
  std::vector<const dy::DyadicSystem*> systems{&sys};

  bool ok = true;
  std::string rows;
  for (const char* id : {"compact_support", "logdelta"}) {
    const auto sym = osc::make_symbol(lab.ball2, id, cloud.delta_min());
    const bool expect_vmo = std::string(id) == "compact_support";
    const auto kb = osc::bmo_kobayashi(*lab.ball2, sym, 1.0, 2.0, centers, 3000,
                                       item_seed(lab.opt.seed, 61));
    const auto dyr = osc::bmo_dyadic(systems, sym, 2.0, 384,
                                     item_seed(lab.opt.seed, 62));
    const auto bzr = osc::bmo_berezin(cloud, sym, 2.0, bz_centers, 12288,
                                      item_seed(lab.opt.seed, 63));
    const bool v1 = osc::vmo_profile(kb).vmo;
    const bool v2 = osc::vmo_profile(dyr).vmo;
    const bool v3 = osc::vmo_profile(bzr).vmo;
    ok = ok && v1 == expect_vmo && v2 == expect_vmo && v3 == expect_vmo;
    rows += std::string(id) + "->" + (v1 ? "V" : "-") + (v2 ? "V" : "-") +
            (v3 ? "V" : "-") + " ";
  }
  r.pass = ok;
  r.detail = rows + "(expected compact_support VVV, logdelta ---)";
  return r;
}

// --------------------------------------------------------------- criterion 7

CriterionResult c7_commutator_correlation(Lab& lab) {
  CriterionResult r{7, "commutator norm vs BMO correlation (disk)", false, ""};
  const auto& P = lab.dproj();
  const auto centers = osc::stratified_centers(*lab.disk, 1e-3, 1e-1, 8,
                                               item_seed(lab.opt.seed, 70));
  double band = 1.0;
  std::string rows;
  for (const char* id :
       {"bounded_smooth", "compact_support", "logdelta", "oscillating", "conjz1"}) {
    const auto sym = osc::make_symbol(lab.disk, id, 1e-6);
    const auto b = P.sample(sym.eval);
    const double nm =
        op::commutator_norm_l2(P, b, op::Projection::Mode::raw, 1e-4, 1000)
            .value;
    const double bm = osc::bmo_kobayashi(*lab.disk, sym, 1.0, 2.0, centers,
                                         2048, item_seed(lab.opt.seed, 71))
                          .sup_value;
    if (nm <= 0 || bm <= 0) {
      band = 1e300;
      continue;
    }
    const double ratio = nm / bm;
    band = std::max(band, std::max(ratio, 1.0 / ratio));
    rows += std::string(id) + "=" + fmt(ratio) + " ";
  }

  // joint divergence of the capped delta-power family
  std::vector<double> lx, ln, lb;
  for (double cap : {1e-2, 3e-3, 1e-3}) {
    const auto sym = osc::make_symbol(lab.disk, "deltapow", cap, -0.3);
    const auto b = P.sample(sym.eval);
    const double nm =
        op::commutator_norm_l2(P, b, op::Projection::Mode::raw, 1e-4, 1000)
            .value;
    const double bm = osc::bmo_kobayashi(*lab.disk, sym, 1.0, 2.0, centers,
                                         2048, item_seed(lab.opt.seed, 72))
                          .sup_value;
    lx.push_back(std::log(cap));
    ln.push_back(std::log(nm));
    lb.push_back(std::log(bm));
  }
  const double slope_n = fit_line(lx, ln).slope;
  const double slope_b = fit_line(lx, lb).slope;
  const bool diverge_ok = std::abs(slope_n - slope_b) <= 0.1 && slope_n < -0.05;

  r.pass = band <= 50.0 && diverge_ok;
  r.detail = "band C = " + fmt(band) + " (<= 50); ratios " + rows +
             "; capped-family slopes " + fmt(slope_n) + " vs " + fmt(slope_b) +
             " (+-0.1)";
  return r;
}

// --------------------------------------------------------------- criterion 8

CriterionResult c8_compactness(Lab& lab) {
  CriterionResult r{8, "compactness dichotomy via peaking responses", false, ""};
  const auto& P = lab.dproj();
  const Domain& dom = *lab.disk;

  auto response = [&](const Eigen::VectorXcd& b, double delta,
                      std::uint64_t seed) {
    Rng rng(seed);
    const Cn z = (1.0 - delta) * rng.sphere_dir(1);
    const auto s = P.sample([&](const Cn& w) {
      return bz::peaking_eval_cx(dom, z, 2.0, w);
    });
    return P.norm(P.commutator_apply(b, s, op::Projection::Mode::raw)) /
           std::max(P.norm(s), 1e-300);
  };

  const auto cs = osc::make_symbol(lab.disk, "compact_support", 1e-6);
  const auto ld = osc::make_symbol(lab.disk, "logdelta", 1e-6);
  const auto b_cs = P.sample(cs.eval);
  const auto b_ld = P.sample(ld.eval);

  double bulk_cs = 0.0, deep_cs = 0.0, bulk_ld = 0.0, deep_ld = 0.0;
  for (int i = 0; i < 4; ++i) {
    bulk_cs = std::max(bulk_cs, response(b_cs, 0.2, item_seed(lab.opt.seed, 80 + i)));
    deep_cs = std::max(deep_cs, response(b_cs, 1e-3, item_seed(lab.opt.seed, 84 + i)));
    bulk_ld = std::max(bulk_ld, response(b_ld, 0.2, item_seed(lab.opt.seed, 80 + i)));
    deep_ld = std::max(deep_ld, response(b_ld, 1e-3, item_seed(lab.opt.seed, 84 + i)));
  }
  const bool cs_ok = deep_cs < 0.10 * bulk_cs;
  const bool ld_ok = deep_ld >= 0.50 * bulk_ld;
  r.pass = cs_ok && ld_ok;
  r.detail = "compact_support " + fmt(deep_cs / bulk_cs) +
             " of bulk (< 0.1); logdelta " + fmt(deep_ld / bulk_ld) +
             " of bulk (>= 0.5)";
  return r;
}

// --------------------------------------------------------------- criterion 9

CriterionResult c9_cf_reproduction(Lab& lab) {
  CriterionResult r{9, "Cauchy-Fantappie reproduction of holomorphic monomials",
                    false, ""};
  op::CfKernel cf(lab.ball2, 1e-3);
  const auto calib_cloud =
      sample_interior(lab.ball2, lab.scaled(100000), 12, item_seed(lab.opt.seed, 90));
  const auto calib_centers =
      delta_ladder(*lab.ball2, 3e-2, 2e-1, 2, item_seed(lab.opt.seed, 91));
  const auto calib = op::calibrate_kappa(cf, calib_cloud, calib_centers,
                                         item_seed(lab.opt.seed, 92));

  const auto vcloud = sample_interior(lab.ball2, lab.scaled(100000), 12,
                                      item_seed(lab.opt.seed, 93));
  Rng rng(item_seed(lab.opt.seed, 94));
  bool ok = true;
  double worst_z = 0.0;
  for (int trial = 0; trial < 2; ++trial) {
    const Cn z = (1.0 - 0.05 * (trial + 1)) * rng.sphere_dir(2);
    const std::function<cxd(const Cn&)> fs[3] = {
        [](const Cn&) { return cxd{1.0, 0.0}; },
        [](const Cn& w) { return w[0]; },
        [](const Cn& w) { return w[0] * w[1]; }};
    const cxd expect[3] = {cxd{1.0, 0.0}, z[0], z[0] * z[1]};
    for (int j = 0; j < 3; ++j) {
      const auto t = cf.apply(vcloud, z, fs[j], 32768,
                              item_seed(lab.opt.seed, 95 + 3 * trial + j));
      const double zscore = std::abs(t.value - expect[j]) / std::max(t.se, 1e-300);
      worst_z = std::max(worst_z, zscore);
      ok = ok && zscore <= 3.0;
    }
  }
  r.pass = ok;
  r.detail = "kappa " + fmt(calib.kappa) + " (spread " + fmt(calib.spread) +
             "), worst z-score " + fmt(worst_z) + " (<= 3)";
  return r;
}

// -------------------------------------------------------------- criterion 10

CriterionResult c10_exactness_floor(Lab& lab) {
  CriterionResult r{10, "exactness floor: closed forms and determinism", false, ""};
  int failures = 0;
  auto expect = [&](bool cond) {
    if (!cond) ++failures;
  };
  const Domain& ball = *lab.ball2;
  const Domain& disk = *lab.disk;

  // domain closed forms
  {
    const auto e = ball.eval(Cn(2));
    expect(e.rho == -1.0);
    expect(e.dz[0] == cxd{0.0, 0.0});
    expect(e.hermitian(0, 0) == cxd{1.0, 0.0});
    expect(e.holomorphic(0, 0) == cxd{0.0, 0.0});
    const EllipsoidDomain ell({1.0, 4.0});
    expect(std::abs(ell.rho(Cn{cxd{0.5, 0}, cxd{0.3, 0}}) + 0.39) < 1e-15);
    const auto p = boundary_project(ball, Cn{cxd{0.5, 0}, cxd{0, 0}});
    expect(std::abs(p.pi[0] - cxd{1.0, 0.0}) < 1e-14);
    expect(std::abs(p.delta - 0.5) < 1e-14);
    const auto origin = boundary_project(ball, Cn(2));
    expect(std::abs(origin.delta - 1.0) < 1e-14);
    const auto lv =
        levi_form(ball, Cn{cxd{1, 0}, cxd{0, 0}}, Cn{cxd{0, 0}, cxd{1, 0}});
    expect(std::abs(lv.levi - 1.0) < 1e-14);
    expect(lv.normal.norm() < 1e-14);
    const auto ln =
        levi_form(ball, Cn{cxd{1, 0}, cxd{0, 0}}, Cn{cxd{0, 1}, cxd{0, 0}});
    expect(std::abs(ln.levi) < 1e-14);
  }
  // metric closed forms
  {
    const Cn zeta{cxd{1, 0}, cxd{0, 0}};
    const Cn xi{cxd{0, 0}, cxd{1, 0}};
    expect(mt::boundary_quasidist(ball, zeta, zeta) == 0.0);
    expect(std::abs(mt::boundary_quasidist(ball, zeta, xi) - std::sqrt(3.0)) <
           1e-14);
    expect(mt::box_membership(ball, zeta, 0.2, zeta));
    expect(std::abs(mt::big_f(ball, Cn(2), Cn(2)) - 2.0) < 1e-14);
    expect(std::abs(mt::big_f(ball, Cn(2), Cn{cxd{0.5, 0}, cxd{0, 0}}) - 2.0) <
           1e-14);
    expect(std::abs(mt::levi_g(ball, Cn(2), Cn(2)) - cxd{1.0, 0.0}) < 1e-14);
    expect(std::abs(mt::levi_g(ball, Cn{cxd{0.5, 0}, cxd{0, 0}}, Cn(2)) -
                    cxd{1.0, 0.0}) < 1e-14);
    expect(std::abs(mt::kobayashi_exact_ball(ball, Cn(2),
                                             Cn{cxd{0.5, 0}, cxd{0, 0}}) -
                    std::atanh(0.5)) < 1e-14);
    expect(mt::kobayashi_proxy(ball, Cn{cxd{0.3, 0}, cxd{0, 0}},
                               Cn{cxd{0.3, 0}, cxd{0, 0}}) == 0.0);
    mt::KobayashiBallSpec spec{Cn(2), std::atanh(0.5), true, 0.0};
    expect(mt::kobayashi_ball_membership(ball, spec, Cn(2)) ==
           mt::Membership::inside);
    expect(mt::kobayashi_ball_membership(ball, spec,
                                         Cn{cxd{0.49, 0}, cxd{0, 0}}) ==
           mt::Membership::inside);
    expect(mt::kobayashi_ball_membership(ball, spec,
                                         Cn{cxd{0.51, 0}, cxd{0, 0}}) ==
           mt::Membership::outside);
    const Cn z{cxd{0.9, 0}, cxd{0, 0}};
    expect(mt::polydisk_membership(ball, z, 0.01, z));
    expect(mt::polydisk_membership(ball, z, 0.01, Cn{cxd{0.9, 0.005}, cxd{0, 0}}));
  }
  // kernels
  {
    expect(std::abs(op::bergman_kernel_ball(disk, Cn(1), Cn(1)) -
                    cxd{1.0 / M_PI, 0.0}) < 1e-15);
    expect(std::abs(bz::peaking_eval(ball, Cn(2), 2.0,
                                     Cn{cxd{0.3, 0.2}, cxd{0.1, 0}}) -
                    1.0) < 1e-14);
  }
  // determinism: identical seeds give byte-identical structures
  {
    const auto a = sample_interior(lab.disk, 5000, 6, 99);
    const auto b = sample_interior(lab.disk, 5000, 6, 99);
    bool same = a.size() == b.size();
    Sha256 ha, hb;
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      ha.update(&a[i].z[0], sizeof(cxd));
      hb.update(&b[i].z[0], sizeof(cxd));
      ha.update(&a[i].weight, sizeof(double));
      hb.update(&b[i].weight, sizeof(double));
    }
    expect(same && ha.hex_digest() == hb.hex_digest());
  }
  r.pass = failures == 0;
  r.detail = failures == 0 ? "all closed-form checks exact"
                           : std::to_string(failures) + " checks failed";
  return r;
}

}  // namespace

Summary run_all(std::ostream& out, const Options& opt) {
  Lab lab;
  lab.opt = opt;
  using Fn = std::function<CriterionResult(Lab&)>;
  const std::vector<Fn> criteria{
      c1_measure_law,  c2_bb_sandwich,        c3_rudin_forelli,
      c4_peaking_norms, c5_bmo_equivalence,   c6_vmo_classification,
      c7_commutator_correlation, c8_compactness, c9_cf_reproduction,
      c10_exactness_floor};

  Summary sum;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!opt.only.empty() &&
        std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end())
      continue;
    CriterionResult res;
    try {
      res = criteria[i](lab);
    } catch (const std::exception& e) {
      res.id = id;
      res.pass = false;
      res.detail = std::string("exception: ") + e.what();
    }
    out << (res.pass ? "[PASS] " : "[FAIL] ") << "criterion " << res.id << ": "
        << res.name << " -- " << res.detail << std::endl;
    sum.all_pass = sum.all_pass && res.pass;
    sum.results.push_back(res);
  }
  return sum;
}

}  // namespace splab::acceptance
