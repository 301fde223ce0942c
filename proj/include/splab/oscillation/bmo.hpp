#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splab/berezin/berezin.hpp"
#include "splab/dyadic/system.hpp"
#include "splab/oscillation/symbols.hpp"
#include "splab/sampling/cloud.hpp"

namespace splab::oscillation {

struct CenterOsc {
  Cn z;
  double delta = 0.0;
  double value = 0.0;  // L^p mean oscillation at this center/tent
  double se = 0.0;
};

struct OscReport {
  std::string symbol_id;
  std::string functional;  // kobayashi | dyadic | berezin
  double p = 2.0;
  double r = 0.0;          // radius (kobayashi) or beta (dyadic)
  double sup_value = 0.0;  // max over centers/tents
  std::vector<CenterOsc> centers;
  int starved = 0;
};

/// Stratified center set: per_decade centers per delta decade in
/// [delta_lo, delta_hi], deterministic given the seed.
std::vector<Cn> stratified_centers(const Domain& dom, double delta_lo,
                                   double delta_hi, int per_decade,
                                   std::uint64_t seed);

/// Kobayashi-ball oscillation sup_z (avg_{E(z,r)} |b - <b>|^p)^{1/p}.
OscReport bmo_kobayashi(const Domain& dom, const Symbol& b, double r, double p,
                        const std::vector<Cn>& centers,
                        std::size_t quad_points = 4096, std::uint64_t seed = 1);

/// Dyadic oscillation: sup over the tents of all given systems.
OscReport bmo_dyadic(const std::vector<const dyadic::DyadicSystem*>& systems,
                     const Symbol& b, double p, std::size_t quad_points = 512,
                     std::uint64_t seed = 1);

/// Berezin oscillation: sup_z (integral |b - btilde(z)|^p |s_z|^2)^{1/p}.
OscReport bmo_berezin(const SampleCloud& cloud, const Symbol& b, double p,
                      const std::vector<Cn>& centers,
                      std::size_t n_near = 16384, std::uint64_t seed = 1);

struct VmoProfile {
  std::vector<double> thresholds;  // decreasing delta thresholds
  std::vector<double> sup_below;   // sup of osc over centers with delta < t
  double bulk = 0.0;               // sup over the full center set
  bool vmo = false;                // decayed below frac*bulk by the cut
};

/// Monotone decay envelope of a report's center curve; classification per
/// the stated rule (below frac of bulk by delta = cut).
VmoProfile vmo_profile(const OscReport& report, double cut = 1e-3,
                       double frac = 0.1);

// ----------------------------------------------------------------- BDA (p=2)

struct Bda2Result {
  double value = 0.0;   // sqrt of the mean-square distance to the space
  int degree = 0;       // polynomial degree actually used
  bool reduced = false; // degree lowered due to rank deficiency
};

/// Certified upper bound on the L2 distance from b to holomorphic functions
/// over E(z,r): least squares onto holomorphic polynomials of total degree
/// <= degree in frame coordinates at z.
Bda2Result bda2_distance(const Domain& dom, const Symbol& b, const Cn& z,
                         double r, int degree, std::size_t quad_points = 4096,
                         std::uint64_t seed = 1);

}  // namespace splab::oscillation
