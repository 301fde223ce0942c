#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "splab/core/cn.hpp"
#include "splab/domain/domain.hpp"
#include "splab/sampling/cloud.hpp"

namespace splab::oplab {

/// Bergman kernel of the unit ball: n! / (pi^n (1 - <z,w>)^{n+1}).
/// Throws std::invalid_argument on domains without the kernel oracle.
cxd bergman_kernel_ball(const Domain& dom, const Cn& z, const Cn& w);

/// Nystrom discretization of the Bergman projection on a cloud. The raw
/// matrix is K(z_i, z_j) w_j; the spectral mode replaces it by the nearest
/// weighted-orthogonal projection (eigenvectors of W^{1/2} K W^{1/2} above
/// 1/2), which is exactly idempotent, so the Hankel/commutator algebra
/// holds to round-off on it.
class Projection {
 public:
  enum class Mode { raw, spectral };

  const SampleCloud& cloud() const { return *cloud_; }
  std::size_t size() const { return n_; }
  const Eigen::VectorXd& weights() const { return w_; }

  /// Apply the discretized projection.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& f, Mode mode) const;

  /// Apply the plain matrix adjoint M^H (building block of the weighted
  /// adjoint W^{-1} M^H W).
  Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd& f, Mode mode) const;

  /// [b,P] f = b (P f) - P (b f).
  Eigen::VectorXcd commutator_apply(const Eigen::VectorXcd& b,
                                    const Eigen::VectorXcd& f,
                                    Mode mode) const;

  /// H_b f = (I - P)(b (P f)).
  Eigen::VectorXcd hankel_apply(const Eigen::VectorXcd& b,
                                const Eigen::VectorXcd& f, Mode mode) const;

  /// Weighted L2 norm sqrt(sum w_i |f_i|^2).
  double norm(const Eigen::VectorXcd& f) const;
  /// Weighted inner product <f, g>_w.
  cxd inner(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) const;

  double idempotence_residual() const { return idem_; }
  double selfadjoint_residual() const { return self_; }

  /// Evaluate a function on the cloud points.
  Eigen::VectorXcd sample(const std::function<cxd(const Cn&)>& f) const;

  friend Projection discretize_projection(const SampleCloud& cloud,
                                          bool build_spectral);

 private:
  const SampleCloud* cloud_ = nullptr;
  std::size_t n_ = 0;
  Eigen::VectorXd w_;
  Eigen::MatrixXcd raw_;       // Nystrom matrix K .* w
  Eigen::MatrixXcd spectral_;  // exact projection (empty unless built)
  double idem_ = 0.0;
  double self_ = 0.0;
};

/// Assemble the Nystrom matrix (parallel row blocks) and residual audits.
/// Throws std::runtime_error above the dense-size cap (5000 points).
Projection discretize_projection(const SampleCloud& cloud,
                                 bool build_spectral = false);

/// Serial reference assembly of the raw matrix; bit-identical to the
/// parallel path (kept for the benchmark and the equivalence test).
Eigen::MatrixXcd assemble_nystrom_reference(const SampleCloud& cloud);
Eigen::MatrixXcd assemble_nystrom(const SampleCloud& cloud);

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest singular value of [b,P] in the weighted metric by power
/// iteration on the normal operator; relative tolerance, iteration cap.
NormEstimate commutator_norm_l2(const Projection& proj,
                                const Eigen::VectorXcd& b,
                                Projection::Mode mode, double tol = 1e-3,
                                int max_iter = 500, std::uint64_t seed = 1);

/// Dense SVD oracle of the same weighted operator (clouds <= 2000 points).
double commutator_norm_dense(const Projection& proj, const Eigen::VectorXcd& b,
                             Projection::Mode mode);

/// Lower bounds on the L^p -> L^p norm from a test dictionary of functions
/// (sampled Rayleigh ratios ||[b,P]f||_p / ||f||_p). Labeled lower bounds.
double commutator_norm_lp_lower(const Projection& proj,
                                const Eigen::VectorXcd& b, double p,
                                const std::vector<Eigen::VectorXcd>& dictionary,
                                Projection::Mode mode);

/// Tail-norm curve: for each cut, the weighted norm of R_t [b,P] where R_t
/// restricts to {delta(z) < cut}.
std::vector<double> compactness_tail(const Projection& proj,
                                     const Eigen::VectorXcd& b,
                                     const std::vector<double>& cuts,
                                     Projection::Mode mode,
                                     std::uint64_t seed = 1);

/// ||[b,P] S_{z,2}||_2 / ||S_{z,2}||_2 on the disk through the analytic
/// reproducing identity: P S_z = S_z, so [b,P]S_z = (I-P)(b S_z), and
/// ||(I-P)g||^2 = ||g||^2 - sum_k |<g, e_k>|^2 over the explicit monomial
/// basis. Resolves centers at any depth (no matrix resolution ceiling).
double hankel_peaking_response(const SampleCloud& cloud, const Cn& z,
                               const std::function<cxd(const Cn&)>& b,
                               int max_modes = 2048,
                               std::size_t n_near = 16384,
                               std::uint64_t seed = 1);

}  // namespace splab::oplab
