#include "doctest.h"

#include <cmath>
#include <vector>

#include "splab/core/cn.hpp"
#include "splab/core/parallel.hpp"
#include "splab/core/rng.hpp"
#include "splab/core/sha256.hpp"
#include "splab/core/stats.hpp"

using namespace splab;

TEST_CASE("hermitian pairing convention") {
  Cn a{cxd{1, 0}, cxd{0, 0}};
  Cn b{cxd{1, 0}, cxd{-1, 0}};
  CHECK((hdot(b, a) == cxd{1, 0}));
  Cn c{cxd{0, 1}};
  CHECK((hdot(c, c) == cxd{1, 0}));
}

TEST_CASE("rng reproducibility and moments") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng r(7);
  MeanVar mv;
  for (int i = 0; i < 200000; ++i) mv.add(r.normal());
  CHECK(std::abs(mv.mean) < 0.01);
  CHECK(std::abs(mv.variance() - 1.0) < 0.02);
}

TEST_CASE("sphere directions are unit and isotropic") {
  Rng r(3);
  MeanVar first;
  for (int i = 0; i < 20000; ++i) {
    Cn u = r.sphere_dir(2);
    CHECK(std::abs(u.norm() - 1.0) < 1e-12);
    first.add(u[0].real());
  }
  CHECK(std::abs(first.mean) < 0.02);
}

TEST_CASE("halton covers the square with low discrepancy") {
  Halton h(2, 11);
  double buf[2];
  int grid[4][4] = {};
  const int N = 4096;
  for (int i = 0; i < N; ++i) {
    h.point(i, buf);
    CHECK(buf[0] >= 0.0);
    CHECK(buf[0] < 1.0);
    grid[static_cast<int>(buf[0] * 4)][static_cast<int>(buf[1] * 4)]++;
  }
  for (auto& row : grid)
    for (int c : row) CHECK(std::abs(c - N / 16) < N / 64);
}

TEST_CASE("kahan map_sum is chunk-independent and matches serial") {
  const std::size_t n = 100000;
  auto term = [](std::size_t i) { return std::sin(0.001 * i) / (1.0 + i); };

  par::set_threads(1);
  const double serial = par::map_sum(n, term);
  par::set_threads(4);
  const double parallel = par::map_sum(n, term);
  par::set_threads(0);
  CHECK(serial == parallel);  // bitwise: ordered reduction by design
}

TEST_CASE("linear regression recovers a slope") {
  std::vector<double> x, y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(i * 0.1);
    y.push_back(3.0 - 2.0 * i * 0.1);
  }
  auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sha256 known vectors") {
  CHECK(Sha256::hash_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(Sha256::hash_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
