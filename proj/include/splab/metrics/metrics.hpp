#pragma once

#include <cstdint>
#include <optional>

#include "splab/core/cn.hpp"
#include "splab/domain/domain.hpp"

namespace splab::metrics {

/// Quintic smoothstep cutoff: 1 for t <= mu/2, 0 for t >= mu.
double chi_cutoff(double t, double mu);

/// Boundary quasi-metric d_B(zeta, xi) = (|<dbar rho(zeta), zeta - xi>| +
/// |zeta - xi|^2)^{1/2}; stands in for the horizontal path metric by the
/// Ball-Box comparability (audited, not assumed).
double boundary_quasidist(const Domain& dom, const Cn& zeta, const Cn& xi);

/// Box(zeta, r) membership: split xi - zeta at zeta, |Z_N| < r^2, |Z_H| < r.
bool box_membership(const Domain& dom, const Cn& zeta, double r, const Cn& xi);

/// F(z,w) = |rho(w)| + |rho(z)| + |Im <dbar rho(w), w-z>| + |w-z|^2.
double big_f(const Domain& dom, const Cn& z, const Cn& w);

/// Levi polynomial P_w(z) built from first derivatives and the (possibly
/// eps-mollified) holomorphic Hessian at w.
cxd levi_polynomial(const Domain& dom, const Cn& w, const Cn& z,
                    std::optional<double> eps = std::nullopt);

/// g(w,z) = -rho(w) - chi(|w-z|^2) P_w(z) + (1 - chi) |w-z|^2.
/// eps selects the mollified-Hessian variant g_eps.
cxd levi_g(const Domain& dom, const Cn& w, const Cn& z,
           std::optional<double> eps = std::nullopt);

/// Largest mu from a dyadic ladder keeping Re g >= c_floor * F over sampled
/// near-diagonal interior pairs. Domains with a global Levi chart return
/// their construction-time mu unchanged.
double calibrate_mu(const Domain& dom, int n_pairs, std::uint64_t seed,
                    double c_floor = 0.05);

// ---------------------------------------------------------------- Kobayashi

/// Two-sided Kobayashi distance proxy
///   k(z,w) = 2 log[(d_B(pi(z),pi(w)) + max(delta(z),delta(w))^{1/2})
///                  / (delta(z) delta(w))^{1/4}],
/// exactly 0 at z == w. Differs from the true distance by a bounded
/// additive constant (calibrated as c_bb on the ball).
double kobayashi_proxy(const Domain& dom, const Cn& z, const Cn& w);

/// Variant with precomputed projections (hot loops cache pi/delta).
double kobayashi_proxy(const Domain& dom, const Cn& pi_z, double delta_z,
                       const Cn& pi_w, double delta_w, bool same_point);

/// Ball automorphism phi_a(w) (involution with phi_a(a) = 0).
Cn ball_automorphism(const Cn& a, const Cn& w);

/// Exact Kobayashi distance on the unit ball: arctanh |phi_z(w)|.
/// Throws std::invalid_argument on domains without the oracle flag.
double kobayashi_exact_ball(const Domain& dom, const Cn& z, const Cn& w);

enum class Membership { inside, outside, uncertain };

struct KobayashiBallSpec {
  Cn center;
  double radius = 1.0;
  bool exact = true;     // oracle mode; false = sandwich (tri-state)
  double c_bb = 1.0;     // additive slack used in sandwich mode
};

Membership kobayashi_ball_membership(const Domain& dom,
                                     const KobayashiBallSpec& spec,
                                     const Cn& w);

// ----------------------------------------------------------------- polydisk

/// Unitary frame at pi(z): column 0 spans the complex normal, the rest the
/// complex tangential directions.
struct NormalFrame {
  Cn base;              // pi(z)
  Cn axes[4];           // unitary frame, axes[0] = complex normal
  int n = 0;
};

NormalFrame normal_frame(const Domain& dom, const Cn& z);

/// Polydisk membership in the frame at pi(z): normal component < r,
/// tangential components < r^{1/2}.
bool polydisk_membership(const Domain& dom, const Cn& z, double r,
                         const Cn& w);

/// max(|c_1|/delta, max_j |c_j|^2/delta): the smallest lambda such that
/// w lies in P(z, lambda * delta(z)). Used by the sandwich audit fits.
double polydisk_size(const Domain& dom, const Cn& z, const Cn& w);

}  // namespace splab::metrics
