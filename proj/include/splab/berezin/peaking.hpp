#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "splab/core/cn.hpp"
#include "splab/domain/domain.hpp"
#include "splab/sampling/cloud.hpp"
#include "splab/sampling/rf.hpp"

namespace splab::berezin {

/// p-normalized peaking kernel S_{z,p}(w) = |rho(z)|^{(n+1)/p'} /
/// |g(z,w)|^{n+1}, with the Levi kernel frozen in its first slot so the
/// dependence on w is holomorphic near the diagonal.
/// Throws std::runtime_error if |g| falls under a relative floor (a
/// miscalibrated cutoff scale).
double peaking_eval(const Domain& dom, const Cn& z, double p, const Cn& w);

/// Holomorphic realization |rho(z)|^{(n+1)/p'} / g(z,w)^{n+1} (same modulus;
/// the operator experiments need membership in the Bergman space).
cxd peaking_eval_cx(const Domain& dom, const Cn& z, double p, const Cn& w);

/// Quadrature points covering the Kobayashi ball E(center, r): uniform
/// rejection from the bounding polydisk fitted by a boundary pilot. Exact
/// membership on oracle domains; sandwich membership elsewhere with the
/// uncertain band kept at half weight (band mass reported).
struct BallQuad {
  std::vector<Cn> points;
  std::vector<double> weights;   // sum estimates |E(center, r)|
  double volume = 0.0;           // sum of weights
  double uncertain_mass = 0.0;   // half-weighted band mass (sandwich mode)
};

BallQuad kobayashi_ball_quad(const Domain& dom, const Cn& center, double r,
                             std::size_t n, std::uint64_t seed,
                             double c_bb = 2.5);

/// <f>_{E(center,r)}: ball average by the quadrature above.
/// Throws std::runtime_error when the ball is starved.
cxd ball_average(const Domain& dom, const Cn& center, double r,
                 const std::function<cxd(const Cn&)>& f, std::size_t n,
                 std::uint64_t seed);

/// One center's peaking data on a shared peaked quadrature: the L2 mass of
/// S_z on the same point set normalizes every downstream integral, so
/// constants are reproduced exactly.
struct NormalizedKernel {
  const Domain* dom = nullptr;
  Cn z;
  PeakedQuad quad;
  double s_l2_sq = 0.0;  // integral of S_z^2 over the quad
};

NormalizedKernel make_normalized_kernel(const SampleCloud& cloud, const Cn& z,
                                        std::size_t n_near, std::uint64_t seed);

/// |s_z(w)|^2-weighted average of f: integral f |S_z|^2 / integral |S_z|^2.
cxd berezin_average(const NormalizedKernel& k,
                    const std::function<cxd(const Cn&)>& f);

/// integral of f |s_z|^2 where s_z = S_z / ||S_z||_2 (same-cloud norm).
double berezin_weighted_integral(const NormalizedKernel& k,
                                 const std::function<double(const Cn&)>& f);

/// ||S_{z,p}||_{L^p(D)} by peaked quadrature.
Integral peaking_lp_norm(const SampleCloud& cloud, const Cn& z, double p,
                         std::size_t n_near, std::uint64_t seed);

}  // namespace splab::berezin
