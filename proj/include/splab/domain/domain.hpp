#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "splab/core/cn.hpp"

namespace splab {

/// n x n complex matrix, inline storage (n <= 4).
class CMat {
 public:
  CMat() = default;
  explicit CMat(int n) : n_(n) { a_.fill(cxd{0.0, 0.0}); }
  int dim() const { return n_; }
  cxd& operator()(int j, int k) { return a_[4 * j + k]; }
  const cxd& operator()(int j, int k) const { return a_[4 * j + k]; }

  static CMat identity(int n) {
    CMat m(n);
    for (int j = 0; j < n; ++j) m(j, j) = cxd{1.0, 0.0};
    return m;
  }

 private:
  int n_ = 0;
  std::array<cxd, 16> a_{};
};

/// Value and Wirtinger derivatives of the defining function at a point.
/// dz[j] = d(rho)/dz_j; for real rho, d(rho)/dzbar_j = conj(dz[j]).
/// hermitian(j,k) = d2(rho)/dz_j dzbar_k, holomorphic(j,k) = d2(rho)/dz_j dz_k.
struct DefiningEval {
  double rho = 0.0;
  Cn dz;
  CMat hermitian;
  CMat holomorphic;
};

/// A bounded strongly pseudoconvex model domain given by a C^2 defining
/// function, star-shaped about the origin. Immutable after construction;
/// all evaluators are const and safe to call concurrently.
class Domain {
 public:
  virtual ~Domain() = default;

  int dim() const { return n_; }
  const std::string& name() const { return name_; }

  virtual DefiningEval eval(const Cn& z) const = 0;

  double rho(const Cn& z) const { return eval(z).rho; }

  /// Vector with j-th component d(rho)/dzbar_j = conj(d(rho)/dz_j).
  Cn dbar_rho(const Cn& z) const {
    DefiningEval e = eval(z);
    Cn v(n_);
    for (int j = 0; j < n_; ++j) v[j] = std::conj(e.dz[j]);
    return v;
  }

  /// Smoothed holomorphic Hessian surrogate tau^eps. Models whose second
  /// derivatives are already C^2 return the exact holomorphic Hessian and a
  /// zero approximation error.
  virtual CMat tau(const Cn& z, double eps) const {
    (void)eps;
    return eval(z).holomorphic;
  }

  /// d(tau_{j,l})/dwbar_k as a matrix in (j,l) for fixed k. Zero whenever
  /// the holomorphic Hessian is constant (ball, ellipsoids).
  virtual CMat tau_dbar(const Cn& z, double eps, int k) const {
    (void)z;
    (void)eps;
    (void)k;
    return CMat(n_);
  }

  /// Achieved sup-norm bound |d2rho - tau^eps| for the given eps request.
  virtual double tau_sup_error(double eps) const {
    (void)eps;
    return 0.0;
  }

  // Oracle capabilities.
  bool has_exact_projection() const { return exact_projection_; }
  bool has_exact_kobayashi() const { return exact_kobayashi_; }
  bool has_exact_bergman_kernel() const { return exact_bergman_; }
  /// True when the Levi polynomial kernel g never vanishes off the boundary
  /// diagonal, so the cutoff chi is identically 1.
  bool global_levi_chart() const { return global_chart_; }

  /// Cutoff scale mu (length^2): chi == 1 for |w-z|^2 <= mu/2, 0 beyond mu.
  double mu() const { return mu_; }

  /// Radius of the tubular neighborhood of bD where the normal projection
  /// is trusted; calibrated per domain.
  double tubular_radius() const { return tubular_radius_; }

  /// Distance from the origin to the boundary along the nearest direction.
  double inradius() const { return inradius_; }

  /// Points beyond this boundary distance take the far-interior branch of
  /// the projection (any minimizer is acceptable there).
  double far_interior_delta() const { return 0.3 * inradius_; }

  /// Euclidean radius of a ball around 0 containing the closure.
  double bounding_radius() const { return bounding_radius_; }

  /// Solve rho(t * dir) = 0 for t > 0 (|dir| = 1). Newton with bisection
  /// fallback; all model domains are star-shaped about the origin.
  double radial_boundary_scale(const Cn& dir) const;

  /// Boundary point in direction dir.
  Cn radial_boundary_point(const Cn& dir) const {
    return radial_boundary_scale(dir) * dir;
  }

 protected:
  Domain(int n, std::string name) : n_(n), name_(std::move(name)) {}

  int n_;
  std::string name_;
  bool exact_projection_ = false;
  bool exact_kobayashi_ = false;
  bool exact_bergman_ = false;
  bool global_chart_ = false;
  double mu_ = 0.5;
  double tubular_radius_ = 0.5;
  double inradius_ = 1.0;
  double bounding_radius_ = 1.0;
};

/// rho = |z|^2 - 1. Carries every exact oracle.
class BallDomain final : public Domain {
 public:
  explicit BallDomain(int n);
  DefiningEval eval(const Cn& z) const override;
};

/// rho = sum_j a_j |z_j|^2 - 1 with a_j > 0.
class EllipsoidDomain final : public Domain {
 public:
  EllipsoidDomain(std::vector<double> coeffs);
  DefiningEval eval(const Cn& z) const override;
  const std::vector<double>& coeffs() const { return a_; }

 private:
  std::vector<double> a_;
};

/// rho = |z|^2 - 1 + eps |Re z_1|^{5/2}: C^2 but not C^3 at Re z_1 = 0.
/// The Levi form stays positive definite for any eps >= 0, so this is the
/// minimal-smoothness regime the eps-mollified kernels exist for.
class PerturbedBallDomain final : public Domain {
 public:
  PerturbedBallDomain(int n, double eps);
  DefiningEval eval(const Cn& z) const override;
  CMat tau(const Cn& z, double eps) const override;
  CMat tau_dbar(const Cn& z, double eps, int k) const override;
  double tau_sup_error(double eps) const override;
  double perturbation() const { return eps_; }

  /// Mollified |t|^{1/2} (the non-C^1 factor in the second derivatives) and
  /// its first derivative; width chosen so the sup error is below tol.
  double mollified_sqrt_abs(double t, double tol) const;
  double mollified_sqrt_abs_deriv(double t, double tol) const;

 private:
  double eps_;
};

/// Construct a registered domain by name.
/// Names: "ball" (param n), "ellipsoid" (param coeffs), "perturbed_ball"
/// (params n, eps).
std::shared_ptr<const Domain> make_ball(int n);
std::shared_ptr<const Domain> make_ellipsoid(std::vector<double> coeffs);
std::shared_ptr<const Domain> make_perturbed_ball(int n, double eps);

// -------------------------------------------------------------------------
// Real-coordinate views (z_j = x_j + i y_j, interleaved (x_1,y_1,...)).

/// Real gradient of rho in R^{2n}.
std::array<double, 8> real_gradient(const DefiningEval& e, int n);

/// Real Hessian of rho in R^{2n} (row-major 2n x 2n in a flat array).
std::array<double, 64> real_hessian(const DefiningEval& e, int n);

// -------------------------------------------------------------------------
// Boundary projection.

struct Projection {
  Cn pi;            // nearest boundary point
  double delta = 0; // |z - pi|
  bool far_interior = false;
  bool converged = true;
  int iterations = 0;
};

/// Normal projection pi(z) and boundary distance delta(z). Exact for the
/// ball; projected Newton on (rho(p)=0, z-p parallel to grad rho(p))
/// elsewhere, seeded from a radial guess. Beyond the far-interior threshold
/// the radial minimizer is returned with far_interior set.
Projection boundary_project(const Domain& dom, const Cn& z);

/// Boundary distance only.
double boundary_distance(const Domain& dom, const Cn& z);

// -------------------------------------------------------------------------
// Levi form.

struct LeviSplit {
  Cn normal;      // component parallel to dbar_rho(zeta)
  Cn horizontal;  // component with <dbar_rho(zeta), .> = 0
  double levi = 0.0;  // Z_H^* (complex Hessian) Z_H
};

/// Split Z at the boundary point zeta into complex-normal and horizontal
/// parts and evaluate the Levi form on the horizontal part.
/// Throws std::invalid_argument if zeta is not on the boundary.
LeviSplit levi_form(const Domain& dom, const Cn& zeta, const Cn& Z,
                    double boundary_tol = 1e-8);

}  // namespace splab
