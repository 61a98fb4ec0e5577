#include <cmath>
#include <random>

#include "doctest.h"
#include "hs/hajlasz.hpp"
#include "hs/maxfn.hpp"
#include "naive_lp.hpp"

using namespace hs;

TEST_CASE("P4 linear field: value 2, g = 1/2, and the matching dual bound") {
  Space s = build_path(4, 1.0);
  ScalarField f = {0, 1, 2, 3};
  auto cert = hajlasz_norm_lp(s, f);
  CHECK(cert.value == doctest::Approx(2.0).epsilon(1e-12));
  for (double g : cert.g) CHECK(g == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(cert.dual_bound == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cert.slack >= -1e-12);
}

TEST_CASE("constant field has zero norm") {
  Space s = build_path(4, 1.0);
  ScalarField f(4, 3.0);
  auto cert = hajlasz_norm_lp(s, f);
  CHECK(cert.value == 0.0);
  for (double g : cert.g) CHECK(g == 0.0);
}

TEST_CASE("LP homogeneity: doubling the field doubles the value") {
  Space s = build_cloud(24, 15);
  std::mt19937_64 rng(7);
  ScalarField f(s.n());
  for (auto& v : f) v = double(rng() >> 11) * 0x1.0p-53;
  auto c1 = hajlasz_norm_lp(s, f);
  ScalarField f2(f);
  for (double& v : f2) v *= 2;
  auto c2 = hajlasz_norm_lp(s, f2);
  CHECK(c2.value == doctest::Approx(2 * c1.value).epsilon(1e-9));
  CHECK(c1.slack >= -1e-9 * (1 + c1.value));
  CHECK(c2.slack >= -1e-9 * (1 + c2.value));
}

TEST_CASE("agrees with the naive covering LP on small fixtures") {
  for (std::uint64_t seed : {3u, 4u}) {
    Space s = build_cloud(10, seed);
    std::mt19937_64 rng(seed * 11 + 1);
    ScalarField f(s.n());
    for (auto& v : f) v = double(rng() >> 11) * 0x1.0p-53 * 3;
    auto cert = hajlasz_norm_lp(s, f);

    // independent route: the covering LP solved directly (min sum g mu)
    const int n = s.n();
    testlp::DenseLp d;
    d.c.assign(n, 0.0);
    for (int x = 0; x < n; ++x) d.c[x] = -s.measure(x);  // max -sum
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y) {
        std::vector<double> row(n, 0.0);
        row[x] = -1;
        row[y] = -1;
        d.add_row(row, testlp::Rel::Le,
                  -std::abs(f[x] - f[y]) / s.dist(x, y));
      }
    auto oracle = testlp::solve_dense(d);
    REQUIRE(oracle.optimal);
    CHECK(cert.value == doctest::Approx(-oracle.value).epsilon(1e-8));
  }
}

TEST_CASE("mn_constant: trivial cases and pair feasibility") {
  Space s = build_path(4, 1.0);
  BallFamily fam = enumerate_balls(s);
  ScalarField c(4, 5.0);
  CHECK(mn_constant(s, fam, c) == 0.0);
  ScalarField f = {0, 1, 2, 3};
  double mn = mn_constant(s, fam, f);
  // Nf is 2/3 everywhere, every pair ratio is 1/(4/3)
  CHECK(mn == doctest::Approx(0.75).epsilon(1e-12));
  ScalarField f5(4);
  for (int i = 0; i < 4; ++i) f5[i] = 5 * f[i];
  CHECK(mn_constant(s, fam, f5) == doctest::Approx(mn).epsilon(1e-12));

  // feasibility of (f, mn * Nf) gives the two-sided control of the value
  auto cert = hajlasz_norm_lp(s, f);
  ScalarField nf = sobolev_sharp(s, fam, f);
  double nf1 = 0;
  for (int x = 0; x < 4; ++x) nf1 += nf[x] * s.measure(x);
  CHECK(cert.value <= 2 * mn * nf1 * (1 + 1e-12));
}
