#pragma once

#include <cstdint>
#include <vector>

#include "splab/core/cn.hpp"
#include "splab/domain/domain.hpp"

namespace splab {

/// Weighted boundary point set: sum of weights estimates the surface measure
/// of the sampled region unbiasedly.
struct BoundarySample {
  std::vector<Cn> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

/// Unit outward real normal at a boundary point.
Cn outward_normal(const Domain& dom, const Cn& xi);

/// Interior point at distance t along the inward normal from xi.
Cn normal_offset(const Domain& dom, const Cn& xi, double t);

/// Jacobian det(I - t W(xi)) of the normal offset map, W the shape operator.
/// Equals (1-t)^{2n-1} on the unit sphere.
double normal_offset_jacobian(const Domain& dom, const Cn& xi, double t);

/// Area of the unit sphere S^{d-1} in R^d.
double sphere_area(int d);

/// Area of the spherical cap {u in S^{d-1} : u . c >= cos(alpha)}.
double cap_area(int d, double alpha);

/// Global boundary sample: uniform directions, radial projection, exact
/// sigma weights (radial surface-measure transform).
BoundarySample sample_boundary_global(const Domain& dom, std::size_t n,
                                      std::uint64_t seed);

/// Boundary sample restricted to directions within angle alpha of the
/// direction of anchor (an existing boundary point). Weights are absolute
/// sigma weights for the sampled patch.
BoundarySample sample_boundary_cap(const Domain& dom, const Cn& anchor,
                                   double alpha, std::size_t n,
                                   std::uint64_t seed);

/// Brute-force nearest boundary point over a sample; test oracle for the
/// projected-Newton path.
struct NearestHit {
  Cn point;
  double distance = 0.0;
  std::size_t index = 0;
};
NearestHit nearest_boundary_brute(const Cn& z, const BoundarySample& sample);

/// Maximum normal curvature over a boundary sample (shape-operator spectral
/// radius); used to calibrate the tubular radius.
double max_normal_curvature(const Domain& dom, const BoundarySample& sample);

}  // namespace splab
