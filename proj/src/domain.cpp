#include "splab/domain/domain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "splab/core/rng.hpp"

namespace splab {

namespace {

// Gauss-Legendre nodes/weights on [-1,1], 32 points, for the mollifier.
struct GL32 {
  std::array<double, 32> x{}, w{};
  GL32() {
    // Newton iteration on Legendre P_32; standard construction.
    const int n = 32;
    for (int i = 0; i < n / 2; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double wt = 2.0 / ((1.0 - t * t) * dp * dp);
      x[i] = -t;
      x[n - 1 - i] = t;
      w[i] = wt;
      w[n - 1 - i] = wt;
    }
  }
};

const GL32& gl32() {
  static const GL32 g;
  return g;
}

// C^infty bump K(u) = c * exp(-1/(1-u^2)) on (-1,1), normalized to mass 1.
double bump_raw(double u) {
  const double t = 1.0 - u * u;
  return t > 0 ? std::exp(-1.0 / t) : 0.0;
}

double bump_mass() {
  static const double m = [] {
    const auto& g = gl32();
    double s = 0.0;
    for (int i = 0; i < 32; ++i) s += g.w[i] * bump_raw(g.x[i]);
    return s;
  }();
  return m;
}

double bump(double u) { return bump_raw(u) / bump_mass(); }

double bump_deriv(double u) {
  const double t = 1.0 - u * u;
  if (t <= 0) return 0.0;
  return bump_raw(u) * (-2.0 * u / (t * t)) / bump_mass();
}

double sqrt_kernel_moment() {
  static const double m1 = [] {
    const auto& g = gl32();
    double s = 0.0;
    for (int i = 0; i < 32; ++i) s += g.w[i] * std::sqrt(std::abs(g.x[i])) * bump(g.x[i]);
    return s;
  }();
  return m1;
}

// Width so that sup_t |(\sqrt{|.|} * K_eta)(t) - \sqrt{|t|}| <= tol/4.
// |sqrt a - sqrt b| <= sqrt|a-b| gives the uniform defect bound
// m1 * sqrt(eta), m1 = int sqrt(|u|) K(u) du < 1.
double mollifier_width(double tol) {
  const double eta = std::pow(tol / (4.0 * sqrt_kernel_moment()), 2.0);
  return std::max(eta, 1e-14);
}

}  // namespace

double Domain::radial_boundary_scale(const Cn& dir) const {
  // rho(t*dir) increasing in t for star-shaped models; bracket then Newton.
  double lo = 0.0, hi = bounding_radius_ * 1.5;
  double flo = rho(lo * dir);
  (void)flo;
  double t = 1.0;
  for (int it = 0; it < 200; ++it) {
    DefiningEval e = eval(t * dir);
    // d/dt rho(t*dir) = 2 Re <dz, conj(dir)>_bilinear = 2 Re sum dz_j dir_j
    cxd s{0.0, 0.0};
    for (int j = 0; j < n_; ++j) s += e.dz[j] * dir[j];
    const double drdt = 2.0 * s.real();
    if (std::abs(drdt) > 1e-14) {
      const double step = e.rho / drdt;
      const double tn = t - step;
      if (tn > lo && tn < hi) {
        t = tn;
        if (std::abs(step) < 1e-14) break;
        continue;
      }
    }
    // bisection fallback
    if (e.rho > 0)
      hi = t;
    else
      lo = t;
    t = 0.5 * (lo + hi);
  }
  return t;
}

// ---------------------------------------------------------------- BallDomain

BallDomain::BallDomain(int n) : Domain(n, "ball") {
  exact_projection_ = true;
  exact_kobayashi_ = true;
  exact_bergman_ = true;
  global_chart_ = true;
  mu_ = 8.0;  // chi == 1 everywhere relevant (diameter^2 = 4 < mu/2... kept large)
  tubular_radius_ = 0.95;
  inradius_ = 1.0;
  bounding_radius_ = 1.0;
}

DefiningEval BallDomain::eval(const Cn& z) const {
  DefiningEval e;
  e.rho = z.norm2() - 1.0;
  e.dz = Cn(n_);
  for (int j = 0; j < n_; ++j) e.dz[j] = std::conj(z[j]);
  e.hermitian = CMat::identity(n_);
  e.holomorphic = CMat(n_);
  return e;
}

// ----------------------------------------------------------- EllipsoidDomain

EllipsoidDomain::EllipsoidDomain(std::vector<double> coeffs)
    : Domain(static_cast<int>(coeffs.size()), "ellipsoid"), a_(std::move(coeffs)) {
  global_chart_ = true;
  double amax = 0.0, amin = 1e300;
  for (double a : a_) {
    amax = std::max(amax, a);
    amin = std::min(amin, a);
  }
  inradius_ = 1.0 / std::sqrt(amax);
  bounding_radius_ = 1.0 / std::sqrt(amin);
  // Max normal curvature of the boundary is reached on the short axis;
  // kappa <= amax/sqrt(amin) gives a safe tubular estimate.
  tubular_radius_ = 0.8 * std::sqrt(amin) / amax;
  mu_ = 8.0 * bounding_radius_ * bounding_radius_;
}

DefiningEval EllipsoidDomain::eval(const Cn& z) const {
  DefiningEval e;
  e.rho = -1.0;
  e.dz = Cn(n_);
  e.hermitian = CMat(n_);
  e.holomorphic = CMat(n_);
  for (int j = 0; j < n_; ++j) {
    e.rho += a_[j] * std::norm(z[j]);
    e.dz[j] = a_[j] * std::conj(z[j]);
    e.hermitian(j, j) = a_[j];
  }
  return e;
}

// ------------------------------------------------------- PerturbedBallDomain

PerturbedBallDomain::PerturbedBallDomain(int n, double eps)
    : Domain(n, "perturbed_ball"), eps_(eps) {
  tubular_radius_ = 0.6;
  inradius_ = radial_boundary_scale(unit_e1(n));  // shortest axis is Re z1
  {
    // min radial scale over the perturbed direction vs unperturbed ones
    Cn d(n);
    d[0] = cxd{0.0, 1.0};
    inradius_ = std::min(inradius_, radial_boundary_scale(d));
  }
  bounding_radius_ = 1.0;
  mu_ = 0.5;  // recalibrated by metrics::calibrate_mu
}

DefiningEval PerturbedBallDomain::eval(const Cn& z) const {
  DefiningEval e;
  e.rho = z.norm2() - 1.0;
  e.dz = Cn(n_);
  for (int j = 0; j < n_; ++j) e.dz[j] = std::conj(z[j]);
  e.hermitian = CMat::identity(n_);
  e.holomorphic = CMat(n_);

  const double t = z[0].real();
  const double at = std::abs(t);
  e.rho += eps_ * std::pow(at, 2.5);
  // f(t) = eps |t|^{5/2}: f' = 2.5 eps |t|^{3/2} sgn t, f'' = 3.75 eps |t|^{1/2}.
  const double fp = 2.5 * eps_ * std::pow(at, 1.5) * (t >= 0 ? 1.0 : -1.0);
  const double fpp = 3.75 * eps_ * std::sqrt(at);
  // t = (z1 + conj z1)/2: d/dz1 = f'/2; all four second Wirtinger
  // derivatives in z1 equal f''/4.
  e.dz[0] += cxd{0.5 * fp, 0.0};
  e.hermitian(0, 0) += cxd{0.25 * fpp, 0.0};
  e.holomorphic(0, 0) += cxd{0.25 * fpp, 0.0};
  return e;
}

double PerturbedBallDomain::mollified_sqrt_abs(double t, double tol) const {
  const double eta = mollifier_width(tol);
  const auto& g = gl32();
  double s = 0.0;
  for (int i = 0; i < 32; ++i)
    s += g.w[i] * std::sqrt(std::abs(t - eta * g.x[i])) * bump(g.x[i]);
  return s;
}

double PerturbedBallDomain::mollified_sqrt_abs_deriv(double t, double tol) const {
  const double eta = mollifier_width(tol);
  const auto& g = gl32();
  // d/dt (h * K_eta)(t) = (1/eta) int h(t - eta u) K'(u) du
  double s = 0.0;
  for (int i = 0; i < 32; ++i)
    s += g.w[i] * std::sqrt(std::abs(t - eta * g.x[i])) * bump_deriv(g.x[i]);
  return s / eta;
}

CMat PerturbedBallDomain::tau(const Cn& z, double eps) const {
  CMat m(n_);
  // Only the (1,1) entry is non-smooth: 0.25 * 3.75*eps_ * |t|^{1/2}.
  const double c = 0.25 * 3.75 * eps_;
  const double tol = eps / std::max(c, 1e-300);
  m(0, 0) = cxd{c * mollified_sqrt_abs(z[0].real(), tol), 0.0};
  return m;
}

CMat PerturbedBallDomain::tau_dbar(const Cn& z, double eps, int k) const {
  CMat m(n_);
  if (k != 0) return m;
  const double c = 0.25 * 3.75 * eps_;
  const double tol = eps / std::max(c, 1e-300);
  // d t / d wbar_1 = 1/2.
  m(0, 0) = cxd{0.5 * c * mollified_sqrt_abs_deriv(z[0].real(), tol), 0.0};
  return m;
}

double PerturbedBallDomain::tau_sup_error(double eps) const {
  const double c = 0.25 * 3.75 * eps_;
  const double tol = eps / std::max(c, 1e-300);
  const double eta = mollifier_width(tol);
  return c * sqrt_kernel_moment() * std::sqrt(eta);
}

std::shared_ptr<const Domain> make_ball(int n) {
  return std::make_shared<BallDomain>(n);
}
std::shared_ptr<const Domain> make_ellipsoid(std::vector<double> coeffs) {
  return std::make_shared<EllipsoidDomain>(std::move(coeffs));
}
std::shared_ptr<const Domain> make_perturbed_ball(int n, double eps) {
  return std::make_shared<PerturbedBallDomain>(n, eps);
}

// ------------------------------------------------------- real-coordinate views

std::array<double, 8> real_gradient(const DefiningEval& e, int n) {
  std::array<double, 8> g{};
  for (int j = 0; j < n; ++j) {
    g[2 * j] = 2.0 * e.dz[j].real();
    g[2 * j + 1] = -2.0 * e.dz[j].imag();
  }
  return g;
}

std::array<double, 64> real_hessian(const DefiningEval& e, int n) {
  std::array<double, 64> h{};
  const int d = 2 * n;
  auto at = [&](int r, int c) -> double& { return h[r * d + c]; };
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const cxd S = e.holomorphic(j, k);
      const cxd H = e.hermitian(j, k);
      at(2 * j, 2 * k) = 2.0 * S.real() + 2.0 * H.real();        // x_j x_k
      at(2 * j + 1, 2 * k + 1) = -2.0 * S.real() + 2.0 * H.real();  // y_j y_k
      at(2 * j, 2 * k + 1) = -2.0 * S.imag() + 2.0 * H.imag();   // x_j y_k
      at(2 * j + 1, 2 * k) = -2.0 * S.imag() - 2.0 * H.imag();   // y_j x_k
    }
  }
  return h;
}

// ------------------------------------------------------------------ Levi form

LeviSplit levi_form(const Domain& dom, const Cn& zeta, const Cn& Z,
                    double boundary_tol) {
  const DefiningEval e = dom.eval(zeta);
  if (std::abs(e.rho) > boundary_tol)
    throw std::invalid_argument("levi_form: point not on the boundary");
  Cn nu(dom.dim());
  for (int j = 0; j < dom.dim(); ++j) nu[j] = std::conj(e.dz[j]);
  const double nn = nu.norm();
  if (nn < 1e-14) throw std::invalid_argument("levi_form: degenerate gradient");
  nu *= 1.0 / nn;

  LeviSplit out;
  const cxd coeff = hdot(Z, nu);
  out.normal = coeff * nu;
  out.horizontal = Z - out.normal;
  cxd q{0.0, 0.0};
  for (int j = 0; j < dom.dim(); ++j)
    for (int k = 0; k < dom.dim(); ++k)
      q += std::conj(out.horizontal[j]) * e.hermitian(j, k) * out.horizontal[k];
  out.levi = q.real();
  return out;
}

}  // namespace splab
