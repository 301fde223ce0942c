#include "splab/operator_lab/nystrom.hpp"

#include <cmath>
#include <stdexcept>

#include "splab/core/parallel.hpp"
#include "splab/core/rng.hpp"
#include "splab/sampling/rf.hpp"

namespace splab::oplab {

cxd bergman_kernel_ball(const Domain& dom, const Cn& z, const Cn& w) {
  if (!dom.has_exact_bergman_kernel())
    throw std::invalid_argument("bergman_kernel_ball: no oracle on " + dom.name());
  const int n = dom.dim();
  double nfact = 1.0;
  for (int j = 2; j <= n; ++j) nfact *= j;
  const cxd denom = std::pow(cxd{1.0, 0.0} - hdot(z, w), n + 1);
  return nfact / (std::pow(M_PI, n) * denom);
}

namespace {

Eigen::MatrixXcd assemble_impl(const SampleCloud& cloud, bool parallel) {
  const std::size_t n = cloud.size();
  const Domain& dom = cloud.domain();
  Eigen::MatrixXcd M(n, n);
  auto row = [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j)
      M(i, j) = bergman_kernel_ball(dom, cloud[i].z, cloud[j].z) * cloud[j].weight;
  };
  if (parallel)
    par::parallel_for(n, row);
  else
    par::serial_for(n, row);
  return M;
}

}  // namespace

Eigen::MatrixXcd assemble_nystrom(const SampleCloud& cloud) {
  return assemble_impl(cloud, true);
}

Eigen::MatrixXcd assemble_nystrom_reference(const SampleCloud& cloud) {
  return assemble_impl(cloud, false);
}

Projection discretize_projection(const SampleCloud& cloud, bool build_spectral) {
  if (cloud.size() > 5000)
    throw std::runtime_error("discretize_projection: above the dense cap");
  Projection p;
  p.cloud_ = &cloud;
  p.n_ = cloud.size();
  p.w_.resize(p.n_);
  for (std::size_t i = 0; i < p.n_; ++i) p.w_[i] = cloud[i].weight;
  p.raw_ = assemble_nystrom(cloud);

  // residuals
  {
    const Eigen::MatrixXcd M2 = p.raw_ * p.raw_;
    p.idem_ = (M2 - p.raw_).norm() / p.raw_.norm();
    // weighted self-adjointness: W M vs (W M)^H
    Eigen::MatrixXcd WM = p.w_.asDiagonal() * p.raw_;
    p.self_ = (WM - WM.adjoint()).norm() / WM.norm();
  }

  if (build_spectral) {
    const Eigen::VectorXd sq = p.w_.array().sqrt();
    const Eigen::VectorXd isq = sq.cwiseInverse();
    Eigen::MatrixXcd A = sq.asDiagonal() * p.raw_ * isq.asDiagonal();
    // Hermitize (A is Hermitian up to quadrature error)
    A = 0.5 * (A + Eigen::MatrixXcd(A.adjoint()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    const auto& U = es.eigenvectors();
    const auto& lam = es.eigenvalues();
    Eigen::MatrixXcd Pi = Eigen::MatrixXcd::Zero(p.n_, p.n_);
    for (std::size_t k = 0; k < p.n_; ++k)
      if (lam[k] > 0.5) Pi += U.col(k) * U.col(k).adjoint();
    p.spectral_ = isq.asDiagonal() * Pi * sq.asDiagonal();
  }
  return p;
}

Eigen::VectorXcd Projection::apply(const Eigen::VectorXcd& f, Mode mode) const {
  const Eigen::MatrixXcd& M = (mode == Mode::spectral) ? spectral_ : raw_;
  if (M.size() == 0) throw std::runtime_error("Projection: mode not built");
  return M * f;
}

Eigen::VectorXcd Projection::apply_adjoint(const Eigen::VectorXcd& f,
                                           Mode mode) const {
  const Eigen::MatrixXcd& M = (mode == Mode::spectral) ? spectral_ : raw_;
  if (M.size() == 0) throw std::runtime_error("Projection: mode not built");
  return M.adjoint() * f;
}

Eigen::VectorXcd Projection::commutator_apply(const Eigen::VectorXcd& b,
                                              const Eigen::VectorXcd& f,
                                              Mode mode) const {
  const Eigen::VectorXcd pf = apply(f, mode);
  const Eigen::VectorXcd bf = b.cwiseProduct(f);
  return b.cwiseProduct(pf) - apply(bf, mode);
}

Eigen::VectorXcd Projection::hankel_apply(const Eigen::VectorXcd& b,
                                          const Eigen::VectorXcd& f,
                                          Mode mode) const {
  const Eigen::VectorXcd pf = apply(f, mode);
  const Eigen::VectorXcd bpf = b.cwiseProduct(pf);
  return bpf - apply(bpf, mode);
}

double Projection::norm(const Eigen::VectorXcd& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += w_[i] * std::norm(f[i]);
  return std::sqrt(s);
}

cxd Projection::inner(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) const {
  cxd s{0.0, 0.0};
  for (std::size_t i = 0; i < n_; ++i) s += w_[i] * f[i] * std::conj(g[i]);
  return s;
}

Eigen::VectorXcd Projection::sample(const std::function<cxd(const Cn&)>& f) const {
  Eigen::VectorXcd v(n_);
  for (std::size_t i = 0; i < n_; ++i) v[i] = f((*cloud_)[i].z);
  return v;
}

NormEstimate commutator_norm_l2(const Projection& proj,
                                const Eigen::VectorXcd& b,
                                Projection::Mode mode, double tol,
                                int max_iter, std::uint64_t seed) {
  const std::size_t n = proj.size();
  NormEstimate out;
  // constant symbols commute exactly; catch the zero operator early
  {
    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(n);
    if ((b - b.mean() * ones).norm() < 1e-14 * b.norm()) return out;
  }

  Rng rng(seed);
  Eigen::VectorXcd v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cxd{rng.normal(), rng.normal()};
  v /= proj.norm(v);

  // adjoint in the weighted metric: A* = W^{-1} A^H W applied via actions:
  // <[b,P]f, g>_w = <f, [b,P]*g>_w with [b,P]* = [conj b, P*]-structure;
  // implemented generically through the matrix action on both sides.
  const Eigen::VectorXd& w = proj.weights();
  auto apply_op = [&](const Eigen::VectorXcd& x) {
    return proj.commutator_apply(b, x, mode);
  };
  // Build the W-adjoint action using the raw/spectral matrix directly.
  // [b,P]^*_w y = W^{-1} (D_bbar P^H - P^H D_bbar) W y ... realized through
  // the available matrix by conjugating weights.
  // weighted adjoint W^{-1} [b,P]^H W with [b,P]^H = M^H D_bbar - D_bbar M^H
  auto apply_adj = [&](const Eigen::VectorXcd& y) {
    Eigen::VectorXcd z = y;
    for (std::size_t i = 0; i < n; ++i) z[i] *= w[i];
    Eigen::VectorXcd bz = z;
    for (std::size_t i = 0; i < n; ++i) bz[i] *= std::conj(b[i]);
    const Eigen::VectorXcd t1 = proj.apply_adjoint(bz, mode);
    Eigen::VectorXcd t2 = proj.apply_adjoint(z, mode);
    for (std::size_t i = 0; i < n; ++i) t2[i] = std::conj(b[i]) * t2[i];
    Eigen::VectorXcd r = t1 - t2;
    for (std::size_t i = 0; i < n; ++i) r[i] /= w[i];
    return r;
  };

  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd u = apply_op(v);
    const double sigma = proj.norm(u);
    if (sigma < 1e-300) return out;
    Eigen::VectorXcd vn = apply_adj(u);
    const double nn = proj.norm(vn);
    if (nn < 1e-300) return out;
    v = vn / nn;
    out.value = std::sqrt(nn);
    out.iterations = it + 1;
    if (it > 2 && std::abs(out.value - prev) <= tol * out.value) {
      out.converged = true;
      break;
    }
    prev = out.value;
  }
  return out;
}

double commutator_norm_dense(const Projection& proj, const Eigen::VectorXcd& b,
                             Projection::Mode mode) {
  const std::size_t n = proj.size();
  if (n > 2000)
    throw std::runtime_error("commutator_norm_dense: oracle capped at 2000");
  Eigen::MatrixXcd C(n, n);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    C.col(j) = proj.commutator_apply(b, e, mode);
    e[j] = 0.0;
  }
  const Eigen::VectorXd sq = proj.weights().array().sqrt();
  const Eigen::MatrixXcd A =
      sq.asDiagonal() * C * sq.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  return svd.singularValues()(0);
}

double commutator_norm_lp_lower(const Projection& proj,
                                const Eigen::VectorXcd& b, double p,
                                const std::vector<Eigen::VectorXcd>& dictionary,
                                Projection::Mode mode) {
  const Eigen::VectorXd& w = proj.weights();
  auto lp = [&](const Eigen::VectorXcd& f) {
    double s = 0.0;
    for (int i = 0; i < f.size(); ++i)
      s += w[i] * std::pow(std::abs(f[i]), p);
    return std::pow(s, 1.0 / p);
  };
  double best = 0.0;
  for (const auto& f : dictionary) {
    const double nf = lp(f);
    if (nf < 1e-300) continue;
    best = std::max(best, lp(proj.commutator_apply(b, f, mode)) / nf);
  }
  return best;
}

std::vector<double> compactness_tail(const Projection& proj,
                                     const Eigen::VectorXcd& b,
                                     const std::vector<double>& cuts,
                                     Projection::Mode mode,
                                     std::uint64_t seed) {
  std::vector<double> out;
  const std::size_t n = proj.size();
  for (double cut : cuts) {
    Eigen::VectorXcd mask(n);
    for (std::size_t i = 0; i < n; ++i)
      mask[i] = proj.cloud()[i].delta < cut ? 1.0 : 0.0;
    // power iteration on R [b,P]
    Rng rng(seed);
    Eigen::VectorXcd v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = cxd{rng.normal(), rng.normal()};
    v /= proj.norm(v);
    double sigma = 0.0;
    const Eigen::VectorXd& w = proj.weights();
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXcd u = proj.commutator_apply(b, v, mode);
      u = mask.cwiseProduct(u);
      // adjoint: [b,P]^*_w (mask .* u)
      Eigen::VectorXcd z = mask.cwiseProduct(u);
      for (std::size_t i = 0; i < n; ++i) z[i] *= w[i];
      Eigen::VectorXcd bz = z;
      for (std::size_t i = 0; i < n; ++i) bz[i] *= std::conj(b[i]);
      Eigen::VectorXcd t1 = proj.apply_adjoint(bz, mode);
      Eigen::VectorXcd t2 = proj.apply_adjoint(z, mode);
      for (std::size_t i = 0; i < n; ++i) t2[i] = std::conj(b[i]) * t2[i];
      Eigen::VectorXcd vn = t1 - t2;
      for (std::size_t i = 0; i < n; ++i) vn[i] /= w[i];
      const double nn = proj.norm(vn);
      if (nn < 1e-300) {
        sigma = 0.0;
        break;
      }
      const double cur = std::sqrt(nn);
      v = vn / nn;
      if (it > 2 && std::abs(cur - sigma) < 1e-3 * cur) {
        sigma = cur;
        break;
      }
      sigma = cur;
    }
    out.push_back(sigma);
  }
  return out;
}

double hankel_peaking_response(const SampleCloud& cloud, const Cn& z,
                               const std::function<cxd(const Cn&)>& b,
                               int max_modes, std::size_t n_near,
                               std::uint64_t seed) {
  const Domain& dom = cloud.domain();
  if (dom.dim() != 1)
    throw std::invalid_argument("hankel_peaking_response: disk only");
  const PeakedQuad q = make_peaked_quad(cloud, z, n_near, seed);
  const std::size_t N = q.points.size();

  // g = b S_z at the quadrature points
  std::vector<cxd> g(N);
  std::vector<double> w2(N);
  par::parallel_for(N, [&](std::size_t i) {
    const cxd s = [&] {
      const cxd gg = cxd{1.0, 0.0} - q.points[i][0] * std::conj(z[0]);
      const double r2 = 1.0 - std::norm(z[0]);
      return std::sqrt(r2) / (gg * gg);
    }();
    g[i] = b(q.points[i]) * s;
    w2[i] = std::norm(s);
  });

  // ||S_z||^2 and ||g||^2
  std::vector<double> buf(N);
  par::parallel_for(N, [&](std::size_t i) { buf[i] = q.weights[i] * w2[i]; });
  const double s_norm2 = par::kahan_sum(buf);
  par::parallel_for(N, [&](std::size_t i) { buf[i] = q.weights[i] * std::norm(g[i]); });
  const double g_norm2 = par::kahan_sum(buf);

  // coefficients <g, e_k>, e_k = sqrt((k+1)/pi) w^k: fixed-size point
  // blocks accumulate independently and reduce in block order, so the sum
  // is deterministic for any thread count
  const std::size_t block = 4096;
  const std::size_t n_blocks = (N + block - 1) / block;
  std::vector<std::vector<cxd>> partial(n_blocks,
                                        std::vector<cxd>(max_modes, cxd{0, 0}));
  par::parallel_for(n_blocks, [&](std::size_t bi) {
    auto& acc = partial[bi];
    const std::size_t lo = bi * block, hi = std::min(N, lo + block);
    for (std::size_t i = lo; i < hi; ++i) {
      cxd pw = q.weights[i] * g[i];
      const cxd wc = std::conj(q.points[i][0]);
      for (int k = 0; k < max_modes; ++k) {
        acc[k] += pw;
        pw *= wc;
      }
    }
  });
  std::vector<cxd> coef(max_modes, cxd{0.0, 0.0});
  for (const auto& acc : partial)
    for (int k = 0; k < max_modes; ++k) coef[k] += acc[k];
  double proj2 = 0.0;
  for (int k = 0; k < max_modes; ++k)
    proj2 += std::norm(coef[k]) * (k + 1) / M_PI;

  const double hank2 = std::max(0.0, g_norm2 - proj2);
  return std::sqrt(hank2 / std::max(s_norm2, 1e-300));
}

}  // namespace splab::oplab
