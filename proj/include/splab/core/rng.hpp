#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "splab/core/cn.hpp"

namespace splab {

/// splitmix64: used for seeding and for one-shot per-item hashes.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic per-item seed: hash of (seed, index). Parallel loops draw
/// from independent streams keyed this way, so results do not depend on the
/// thread schedule.
inline std::uint64_t item_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return splitmix64(s);
}

/// xoshiro256** by Blackman/Vigna. Self-contained so streams are
/// reproducible independent of the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0,1).
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  /// Standard normal via Box-Muller (no library distribution, for
  /// reproducibility across standard libraries).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  /// Uniform direction on the unit sphere of C^n ~ R^{2n}.
  Cn sphere_dir(int n) {
    Cn v(n);
    double r2 = 0.0;
    do {
      for (int j = 0; j < n; ++j) v[j] = cxd{normal(), normal()};
      r2 = v.norm2();
    } while (r2 < 1e-300);
    v *= 1.0 / std::sqrt(r2);
    return v;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4] = {};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Scrambled Halton sequence (bases 2,3,5,7,11,13,17,19), enough for R^{2n}
/// with n <= 4. Per-dimension digit scramble is a seeded random permutation
/// of residues, which keeps the low-discrepancy structure while decorrelating
/// replicate runs.
class Halton {
 public:
  Halton(int dim, std::uint64_t seed) : dim_(dim), perms_(dim) {
    static const int kBases[8] = {2, 3, 5, 7, 11, 13, 17, 19};
    for (int d = 0; d < dim_; ++d) {
      const int b = kBases[d];
      bases_.push_back(b);
      auto& p = perms_[d];
      p.resize(b);
      for (int i = 0; i < b; ++i) p[i] = i;
      Rng rng(item_seed(seed, 1000 + d));
      for (int i = b - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.index(i + 1));
        std::swap(p[i], p[j]);
      }
      // Keep 0 -> 0 so the scramble fixes the origin-digit; standard trick
      // to avoid clumping at 0 from scrambled leading digits.
      if (p[0] != 0) {
        for (int i = 0; i < b; ++i)
          if (p[i] == 0) {
            std::swap(p[0], p[i]);
            break;
          }
      }
    }
  }

  /// Point #idx (idx >= 0), component values in [0,1).
  void point(std::uint64_t idx, double* out) const {
    for (int d = 0; d < dim_; ++d) {
      const int b = bases_[d];
      const auto& p = perms_[d];
      double f = 1.0, x = 0.0;
      std::uint64_t i = idx + 1;  // skip the all-zero point
      while (i > 0) {
        f /= b;
        x += f * p[i % b];
        i /= b;
      }
      out[d] = x;
    }
  }

  int dim() const { return dim_; }

 private:
  int dim_;
  std::vector<int> bases_;
  std::vector<std::vector<int>> perms_;
};

}  // namespace splab
