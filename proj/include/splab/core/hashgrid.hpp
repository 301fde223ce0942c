#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "splab/core/cn.hpp"

namespace splab {

/// Uniform-cell spatial hash over points in C^n ~ R^{2n} for neighbor and
/// nearest queries. Points are identified by dense indices in insertion
/// order; query results preserve that order, keeping downstream selections
/// deterministic.
class HashGrid {
 public:
  HashGrid(int complex_dim, double cell)
      : n_(complex_dim), d_(2 * complex_dim), cell_(cell) {}

  std::size_t insert(const Cn& p) {
    const std::size_t id = points_.size();
    points_.push_back(p);
    buckets_[key(cell_of(p))].push_back(id);
    return id;
  }

  std::size_t size() const { return points_.size(); }
  const Cn& point(std::size_t id) const { return points_[id]; }

  /// All ids within Euclidean distance <= radius of p, ascending.
  void query_ball(const Cn& p, double radius, std::vector<std::size_t>& out) const {
    out.clear();
    std::array<int, 8> lo{}, hi{};
    const auto c = coords(p);
    for (int i = 0; i < d_; ++i) {
      lo[i] = static_cast<int>(std::floor((c[i] - radius) / cell_));
      hi[i] = static_cast<int>(std::floor((c[i] + radius) / cell_));
    }
    std::array<int, 8> idx = lo;
    const double r2 = radius * radius;
    for (;;) {
      auto it = buckets_.find(key(idx));
      if (it != buckets_.end()) {
        for (std::size_t id : it->second)
          if ((points_[id] - p).norm2() <= r2) out.push_back(id);
      }
      int i = 0;
      for (; i < d_; ++i) {
        if (++idx[i] <= hi[i]) break;
        idx[i] = lo[i];
      }
      if (i == d_) break;
    }
    std::sort(out.begin(), out.end());
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  /// Nearest stored point to p by expanding search; npos when empty.
  std::size_t nearest(const Cn& p, double* dist_out = nullptr) const {
    if (points_.empty()) return npos;
    std::vector<std::size_t> cand;
    double r = cell_;
    for (;;) {
      query_ball(p, r, cand);
      if (!cand.empty()) {
        std::size_t best = cand.front();
        double bd = (points_[best] - p).norm2();
        for (std::size_t id : cand) {
          const double dd = (points_[id] - p).norm2();
          if (dd < bd) {
            bd = dd;
            best = id;
          }
        }
        if (std::sqrt(bd) <= r) {
          if (dist_out) *dist_out = std::sqrt(bd);
          return best;
        }
      }
      r *= 2.0;
      if (r > 1e12) return npos;
    }
  }

 private:
  std::array<double, 8> coords(const Cn& p) const {
    std::array<double, 8> c{};
    for (int j = 0; j < n_; ++j) {
      c[2 * j] = p[j].real();
      c[2 * j + 1] = p[j].imag();
    }
    return c;
  }

  std::array<int, 8> cell_of(const Cn& p) const {
    const auto c = coords(p);
    std::array<int, 8> idx{};
    for (int i = 0; i < d_; ++i) idx[i] = static_cast<int>(std::floor(c[i] / cell_));
    return idx;
  }

  std::uint64_t key(const std::array<int, 8>& idx) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (int i = 0; i < d_; ++i) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(idx[i]));
      h *= 1099511628211ULL;
    }
    return h;
  }

  int n_;
  int d_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
  std::vector<Cn> points_;
};

}  // namespace splab
