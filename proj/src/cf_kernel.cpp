#include "splab/operator_lab/cf.hpp"

#include <cmath>

#include "splab/core/rng.hpp"
#include <stdexcept>

#include "splab/metrics/metrics.hpp"

namespace splab::oplab {

namespace {

double chi_deriv(double t, double mu) {
  // derivative of the quintic smoothstep cutoff in t = |w-z|^2
  const double half = 0.5 * mu;
  if (t <= half || t >= mu) return 0.0;
  const double u = (t - half) / half;
  return -(30.0 * u * u - 60.0 * u * u * u + 30.0 * u * u * u * u) / half;
}

}  // namespace

cxd CfKernel::eval(const Cn& z, const Cn& w) const {
  const Domain& dom = *dom_;
  const int n = dom.dim();
  const DefiningEval e = dom.eval(w);
  const CMat tau = dom.tau(w, eps_);

  const Cn wz = w - z;
  const double t = wz.norm2();
  const double mu = dom.mu();
  const bool global = dom.global_levi_chart();
  const double chi = global ? 1.0 : metrics::chi_cutoff(t, mu);
  const double dchi = global ? 0.0 : chi_deriv(t, mu);

  // Levi polynomial P^eps_w(z) and the form coefficients a_j
  cxd P{0.0, 0.0};
  std::array<cxd, 4> a{};
  for (int j = 0; j < n; ++j) {
    const cxd dj = z[j] - w[j];
    P += e.dz[j] * dj;
    cxd quad{0.0, 0.0};
    for (int l = 0; l < n; ++l) {
      P += 0.5 * tau(j, l) * dj * (z[l] - w[l]);
      quad += tau(j, l) * (w[l] - z[l]);
    }
    a[j] = chi * (e.dz[j] - 0.5 * quad) + (1.0 - chi) * std::conj(wz[j]);
  }

  const cxd g = cxd{-e.rho, 0.0} - chi * P + (1.0 - chi) * t;
  const double floor = 1e-14 * (std::abs(e.rho) + t + 1e-30);
  if (std::abs(g) < floor)
    throw std::runtime_error("CfKernel: |g_eps| underflow");

  // dbar_w derivatives
  std::array<cxd, 4> dg{};      // d g / d wbar_k
  std::array<std::array<cxd, 4>, 4> da{};  // d a_j / d wbar_k
  for (int k = 0; k < n; ++k) {
    const CMat dtau = dom.tau_dbar(w, eps_, k);
    // dP/dwbar_k
    cxd dP{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
      dP += e.hermitian(j, k) * (z[j] - w[j]);
      for (int l = 0; l < n; ++l)
        dP += 0.5 * dtau(j, l) * (z[j] - w[j]) * (z[l] - w[l]);
    }
    dg[k] = -std::conj(e.dz[k]) - dchi * wz[k] * P - chi * dP -
            dchi * wz[k] * t + (1.0 - chi) * wz[k];
    for (int j = 0; j < n; ++j) {
      cxd quad{0.0, 0.0}, dquad{0.0, 0.0};
      for (int l = 0; l < n; ++l) {
        quad += tau(j, l) * (w[l] - z[l]);
        dquad += dtau(j, l) * (w[l] - z[l]);
      }
      da[j][k] = dchi * wz[k] * (e.dz[j] - 0.5 * quad) +
                 chi * (e.hermitian(j, k) - 0.5 * dquad) -
                 dchi * wz[k] * std::conj(wz[j]) +
                 (1.0 - chi) * (j == k ? cxd{1.0, 0.0} : cxd{0.0, 0.0});
    }
  }

  // B_kj = d(a_j/g)/dwbar_k; kernel = kappa (n!/pi^n) det B
  cxd det;
  if (n == 1) {
    det = da[0][0] / g - a[0] * dg[0] / (g * g);
  } else if (n == 2) {
    const cxd b00 = da[0][0] / g - a[0] * dg[0] / (g * g);
    const cxd b01 = da[1][0] / g - a[1] * dg[0] / (g * g);
    const cxd b10 = da[0][1] / g - a[0] * dg[1] / (g * g);
    const cxd b11 = da[1][1] / g - a[1] * dg[1] / (g * g);
    det = b00 * b11 - b01 * b10;
  } else {
    // n = 3: expand along the first row
    cxd B[3][3];
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        B[k][j] = da[j][k] / g - a[j] * dg[k] / (g * g);
    det = B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) -
          B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
          B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0]);
  }

  double nfact = 1.0;
  for (int j = 2; j <= n; ++j) nfact *= j;
  return kappa_ * nfact / std::pow(M_PI, n) * det;
}

CfKernel::CxIntegral CfKernel::apply(const SampleCloud& cloud, const Cn& z,
                                     const std::function<cxd(const Cn&)>& f,
                                     std::size_t n_near,
                                     std::uint64_t seed) const {
  // kernel * f is complex; both parts share one quadrature point set
  const PeakedQuad q = make_peaked_quad(cloud, z, n_near, seed);
  const Integral re =
      quad_sum(q, [&](const Cn& w) { return (eval(z, w) * f(w)).real(); });
  const Integral im =
      quad_sum(q, [&](const Cn& w) { return (eval(z, w) * f(w)).imag(); });
  CxIntegral out;
  out.value = cxd{re.value, im.value};
  out.se = std::hypot(re.se, im.se);
  return out;
}

KappaCalibration calibrate_kappa(CfKernel& kernel, const SampleCloud& cloud,
                                 const std::vector<Cn>& centers,
                                 std::uint64_t seed) {
  kernel.set_kappa(1.0);
  KappaCalibration out;
  double sum = 0.0;
  std::vector<double> vals;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto t1 = kernel.apply(
        cloud, centers[i], [](const Cn&) { return cxd{1.0, 0.0}; }, 16384,
        item_seed(seed, i));
    vals.push_back(t1.value.real());
    sum += t1.value.real();
  }
  const double mean = sum / static_cast<double>(vals.size());
  out.kappa = 1.0 / mean;
  for (double v : vals)
    out.spread = std::max(out.spread, std::abs(v - mean) / std::abs(mean));
  kernel.set_kappa(out.kappa);
  return out;
}

}  // namespace splab::oplab
