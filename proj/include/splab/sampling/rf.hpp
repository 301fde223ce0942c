#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "splab/core/stats.hpp"
#include "splab/sampling/cloud.hpp"

namespace splab {

/// Quadrature against f over the whole domain with local refinement around
/// a center z: nested polydisk boxes at pi(z), geometric from scale delta(z)
/// to the domain scale, each annulus sampled uniformly; the global cloud
/// covers the complement of the outermost box. Required whenever the
/// integrand peaks at z (reproducing kernels, Rudin-Forelli integrands).
/// K is accepted for call-site compatibility; the ladder always reaches the
/// domain scale.
Integral integrate_peaked(const SampleCloud& cloud, const Cn& z,
                          const std::function<double(const Cn&)>& f,
                          double K = 32.0, std::size_t n_near = 16384,
                          std::uint64_t seed = 1);

/// Materialized point set of the peaked quadrature around z. Several
/// integrals against the same center share one set, which also makes
/// ratios of integrals exact for constant integrands (same-cloud
/// normalization).
struct PeakedQuad {
  std::vector<Cn> points;
  std::vector<double> weights;
  // [begin,end) per region plus the number of draws behind it (rejected
  // proposals are zero contributions; the variance needs them)
  std::vector<std::pair<std::size_t, std::size_t>> regions;
  std::vector<std::size_t> region_draws;
};

PeakedQuad make_peaked_quad(const SampleCloud& cloud, const Cn& z,
                            std::size_t n_near, std::uint64_t seed);

Integral quad_sum(const PeakedQuad& q,
                  const std::function<double(const Cn&)>& f);

struct RfPoint {
  Cn z;
  double abs_rho = 0.0;
  double integral = 0.0;
  double se = 0.0;
};

struct RfAudit {
  std::vector<RfPoint> centers;
  LineFit fit;        // log(integral) vs log|rho|; slope ~ -b
  double constant = 0.0;  // fitted C = max integral * |rho|^b
};

/// Rudin-Forelli audit: integral of |rho(w)|^a / F(z,w)^{n+1+a+b} for the
/// given centers, with the regression against |rho(z)|.
/// tail_radius restricts to D \ E(z, r) (exact oracle domains only).
/// Throws std::runtime_error when a center's SE exceeds 10% of its value.
RfAudit rudin_forelli_audit(const SampleCloud& cloud, double a, double b,
                            const std::vector<Cn>& centers,
                            std::optional<double> tail_radius = std::nullopt,
                            std::uint64_t seed = 1);

/// Centers z_m along a fixed boundary normal with delta spanning
/// [delta_lo, delta_hi] geometrically, per_decade points per decade.
std::vector<Cn> delta_ladder(const Domain& dom, double delta_lo,
                             double delta_hi, int per_decade,
                             std::uint64_t seed);

}  // namespace splab
