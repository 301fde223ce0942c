#pragma once

#include <cstdint>
#include <functional>

#include "splab/core/cn.hpp"
#include "splab/domain/domain.hpp"
#include "splab/sampling/cloud.hpp"
#include "splab/sampling/rf.hpp"

namespace splab::oplab {

/// Solid Cauchy-like reproducing kernel built from the eps-mollified Levi
/// kernel: kappa * (n!/pi^n) * det(dbar_k (a_j / g_eps)), where a_j are the
/// coefficients of the generating (1,0)-form. All derivatives touch only
/// first/second derivatives of rho and the mollified Hessian field, which is
/// what keeps the construction alive at C^2 boundary regularity. On the
/// ball the kernel collapses to the Bergman kernel (asserted in the tests).
class CfKernel {
 public:
  CfKernel(std::shared_ptr<const Domain> dom, double eps)
      : dom_(std::move(dom)), eps_(eps) {}

  const Domain& domain() const { return *dom_; }
  double eps() const { return eps_; }
  double kappa() const { return kappa_; }
  void set_kappa(double k) { kappa_ = k; }

  /// Kernel value at (z, w); w must stay away from z near the boundary
  /// diagonal (|g_eps| underflow throws).
  cxd eval(const Cn& z, const Cn& w) const;

  struct CxIntegral {
    cxd value{0.0, 0.0};
    double se = 0.0;
  };

  /// T f(z): quadrature of kernel * f over the cloud with local refinement
  /// around z (the kernel peaks on the boundary diagonal).
  CxIntegral apply(const SampleCloud& cloud, const Cn& z,
                   const std::function<cxd(const Cn&)>& f,
                   std::size_t n_near = 16384, std::uint64_t seed = 1) const;

 private:
  std::shared_ptr<const Domain> dom_;
  double eps_;
  double kappa_ = 1.0;
};

/// Fix kappa by reproducing constants on a calibration cloud (mean of T1
/// over the given centers); returns the calibrated value and its spread.
struct KappaCalibration {
  double kappa = 1.0;
  double spread = 0.0;  // max relative deviation of T1 across centers
};
KappaCalibration calibrate_kappa(CfKernel& kernel, const SampleCloud& cloud,
                                 const std::vector<Cn>& centers,
                                 std::uint64_t seed = 1);

}  // namespace splab::oplab
