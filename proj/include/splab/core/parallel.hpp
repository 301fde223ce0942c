#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace splab::par {

/// Global execution policy. threads == 1 selects the serial path; anything
/// else enables the OpenMP kernels. Results are bit-identical either way:
/// parallel loops only ever write disjoint slots and all floating-point
/// reductions happen in a fixed serial order afterwards.
inline int& thread_count() {
  static int t = 0;  // 0 = library default
  return t;
}

inline void set_threads(int t) {
  thread_count() = t;
#ifdef _OPENMP
  if (t > 0) omp_set_num_threads(t);
#endif
}

inline bool parallel_enabled() { return thread_count() != 1; }

/// Apply fn(i) for i in [0, n). fn must only touch state owned by index i.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
#ifdef _OPENMP
  if (parallel_enabled()) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      fn(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

/// Serial reference loop (kept for the benchmark and equivalence tests).
template <typename Fn>
void serial_for(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

/// Kahan-compensated sum over values in index order. Used as the single
/// reduction primitive so totals do not depend on chunking or threads.
inline double kahan_sum(const std::vector<double>& v) {
  double s = 0.0, c = 0.0;
  for (double x : v) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

/// map-then-reduce: buf[i] = fn(i) in parallel, then ordered Kahan sum.
template <typename Fn>
double map_sum(std::size_t n, Fn&& fn) {
  std::vector<double> buf(n);
  parallel_for(n, [&](std::size_t i) { buf[i] = fn(i); });
  return kahan_sum(buf);
}

}  // namespace splab::par
