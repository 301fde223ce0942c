#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>

namespace splab {

using cxd = std::complex<double>;

/// Point in C^n, n <= 4, stored inline (no heap traffic in kernel loops).
class Cn {
 public:
  Cn() = default;
  explicit Cn(int n) : n_(n) { z_.fill(cxd{0.0, 0.0}); }
  Cn(std::initializer_list<cxd> vs) : n_(static_cast<int>(vs.size())) {
    assert(n_ <= 4);
    int i = 0;
    for (const auto& v : vs) z_[i++] = v;
  }

  int dim() const { return n_; }
  cxd& operator[](int j) { return z_[j]; }
  const cxd& operator[](int j) const { return z_[j]; }

  Cn& operator+=(const Cn& o) {
    for (int j = 0; j < n_; ++j) z_[j] += o.z_[j];
    return *this;
  }
  Cn& operator-=(const Cn& o) {
    for (int j = 0; j < n_; ++j) z_[j] -= o.z_[j];
    return *this;
  }
  Cn& operator*=(cxd c) {
    for (int j = 0; j < n_; ++j) z_[j] *= c;
    return *this;
  }
  Cn& operator*=(double c) {
    for (int j = 0; j < n_; ++j) z_[j] *= c;
    return *this;
  }

  friend Cn operator+(Cn a, const Cn& b) { return a += b; }
  friend Cn operator-(Cn a, const Cn& b) { return a -= b; }
  friend Cn operator*(double c, Cn a) { return a *= c; }
  friend Cn operator*(cxd c, Cn a) { return a *= c; }

  double norm2() const {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += std::norm(z_[j]);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

 private:
  int n_ = 0;
  std::array<cxd, 4> z_{};
};

/// Hermitian pairing <a,b> = sum_j a_j * conj(b_j).
inline cxd hdot(const Cn& a, const Cn& b) {
  cxd s{0.0, 0.0};
  for (int j = 0; j < a.dim(); ++j) s += a[j] * std::conj(b[j]);
  return s;
}

/// Real Euclidean inner product of a and b viewed as vectors in R^{2n}.
inline double rdot(const Cn& a, const Cn& b) {
  double s = 0.0;
  for (int j = 0; j < a.dim(); ++j)
    s += a[j].real() * b[j].real() + a[j].imag() * b[j].imag();
  return s;
}

inline double dist(const Cn& a, const Cn& b) { return (a - b).norm(); }

inline Cn zero(int n) { return Cn(n); }

inline Cn unit_e1(int n) {
  Cn v(n);
  v[0] = cxd{1.0, 0.0};
  return v;
}

}  // namespace splab
