#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "splab/core/cn.hpp"
#include "splab/domain/domain.hpp"

namespace splab {

struct CloudPoint {
  Cn z;
  double weight = 0.0;   // volume weight; shell sums are unbiased volumes
  double delta = 0.0;    // cached boundary distance
  Cn pi;                 // cached normal projection
  int shell = -1;        // -1 = interior core, 0.. = boundary shells
};

/// Stratified interior quadrature cloud. The core region
/// {delta > shell_top} is filled by scrambled-Halton box rejection; each
/// geometric boundary shell {delta in (t_{m+1}, t_m]} is filled by
/// sigma-weighted boundary points pushed inward along the normal, with the
/// exact offset Jacobian as weight. Regions are disjoint, so every weighted
/// sum is a single unbiased estimator.
class SampleCloud {
 public:
  const Domain& domain() const { return *dom_; }
  const std::vector<CloudPoint>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  const CloudPoint& operator[](std::size_t i) const { return pts_[i]; }

  int shell_count() const { return static_cast<int>(boundaries_.size()) - 1; }
  /// boundaries [t_0 = shell_top, t_1, ..., t_S ~ 0], geometric ratio 2.
  const std::vector<double>& shell_boundaries() const { return boundaries_; }
  double delta_min() const { return boundaries_[boundaries_.size() - 2]; }
  std::uint64_t seed() const { return seed_; }

  /// index range [begin, end) of shell m in points(); m = -1 for the core.
  std::pair<std::size_t, std::size_t> shell_range(int m) const;

  /// Number of box proposals behind the core region (rejected proposals are
  /// zero contributions of the core estimator; the variance needs them).
  std::size_t core_proposals() const { return core_proposals_; }

  friend SampleCloud sample_interior(std::shared_ptr<const Domain> dom,
                                     std::size_t n_pts, int n_shells,
                                     std::uint64_t seed, double delta_floor);
  friend SampleCloud sample_interior_plain(std::shared_ptr<const Domain> dom,
                                           std::size_t n_pts,
                                           std::uint64_t seed,
                                           double delta_floor);

 private:
  std::shared_ptr<const Domain> dom_;
  std::vector<CloudPoint> pts_;
  std::vector<double> boundaries_;
  std::vector<std::size_t> offsets_;  // region offsets: core, shell 0..S
  std::uint64_t seed_ = 0;
  std::size_t core_proposals_ = 0;
};

/// Build a cloud of ~n_pts points with n_shells geometric boundary shells.
/// delta_floor > 0 truncates the deepest shell there (no points below);
/// operator discretizations use it to keep every kernel peak resolvable.
/// Throws std::runtime_error on shell starvation.
SampleCloud sample_interior(std::shared_ptr<const Domain> dom,
                            std::size_t n_pts, int n_shells,
                            std::uint64_t seed, double delta_floor = 0.0);

/// Plain box-rejection cloud over the whole domain (no shells); the
/// baseline the stratified estimator is measured against.
SampleCloud sample_interior_plain(std::shared_ptr<const Domain> dom,
                                  std::size_t n_pts, std::uint64_t seed,
                                  double delta_floor = 0.0);

struct Integral {
  double value = 0.0;
  double se = 0.0;
};

/// Weighted quadrature with shell-wise variance aggregation and ordered
/// compensated accumulation (results independent of threading/chunking).
/// Throws std::runtime_error naming the first point where f is not finite.
Integral integrate(const SampleCloud& cloud,
                   const std::function<double(const CloudPoint&)>& f);

/// Serial reference implementation (same contract, plain loop); kept for
/// the benchmark and the bit-equality test against the parallel path.
Integral integrate_reference(const SampleCloud& cloud,
                             const std::function<double(const CloudPoint&)>& f);

}  // namespace splab
