#include <cmath>
#include <random>

#include "doctest.h"
#include "hs/balls.hpp"
#include "hs/space.hpp"

using namespace hs;

TEST_CASE("path generator matches hand values") {
  Space p4 = build_path(4, 1.0);
  CHECK(p4.n() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(p4.dist(i, j) == std::abs(i - j));
  for (int i = 0; i < 4; ++i) CHECK(p4.measure(i) == 1.0);
  REQUIRE(p4.edges().size() == 3);
  CHECK(p4.edges()[0].a == 0);
  CHECK(p4.edges()[0].b == 1);
  CHECK(p4.diameter() == 3.0);
}

TEST_CASE("cycle generator uses arc-length metric") {
  Space c8 = build_cycle(8);
  CHECK(c8.n() == 8);
  double step = 2 * M_PI / 8;
  CHECK(c8.dist(0, 1) == doctest::Approx(step).epsilon(1e-15));
  CHECK(c8.dist(0, 4) == doctest::Approx(4 * step).epsilon(1e-15));
  CHECK(c8.dist(0, 7) == doctest::Approx(step).epsilon(1e-15));
  CHECK(c8.edges().size() == 8);
}

TEST_CASE("cloud generator is deterministic bit for bit") {
  Space a = build_cloud(64, 7);
  Space b = build_cloud(64, 7);
  REQUIRE(a.n() == b.n());
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) CHECK(a.dist(i, j) == b.dist(i, j));
  CHECK(a.edges().size() == b.edges().size());
  Space c = build_cloud(64, 8);
  bool same = true;
  for (int i = 0; i < a.n() && same; ++i)
    same = a.coords()[i] == c.coords()[i];
  CHECK_FALSE(same);
}

TEST_CASE("fixture clouds are connected") {
  CHECK_NOTHROW(build_cloud(16, 7));
  CHECK_NOTHROW(build_cloud(64, 7));
  CHECK_NOTHROW(build_cloud(256, 11));
}

TEST_CASE("validation rejects broken inputs") {
  // non-symmetric metric
  std::vector<double> bad = {0, 1, 2, 0};
  CHECK_THROWS_AS(Space(bad, {1, 1}, {{0, 1, 1}}), ValidationError);
  // nonpositive weight
  std::vector<double> m2 = {0, 1, 1, 0};
  CHECK_THROWS_AS(Space(m2, {1, 0}, {{0, 1, 1}}), ValidationError);
  // triangle violation
  std::vector<double> m3 = {0, 1, 5, 1, 0, 1, 5, 1, 0};
  CHECK_THROWS_AS(Space(m3, {1, 1, 1}, {{0, 1, 1}, {1, 2, 1}}),
                  ValidationError);
  // disconnected edge graph
  std::vector<double> m4 = {0, 1, 2, 1, 0, 1, 2, 1, 0};
  CHECK_THROWS_AS(Space(m4, {1, 1, 1}, {{0, 1, 1}}), ValidationError);
}

TEST_CASE("doubling profile of P4 is exactly 3") {
  Space p4 = build_path(4, 1.0);
  auto prof = doubling_profile(p4);
  CHECK(prof.c_d == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(prof.s == doctest::Approx(std::log2(3.0)).epsilon(1e-15));
}

TEST_CASE("doubling profile of a single point") {
  Space one({0.0}, {1.0}, {});
  auto prof = doubling_profile(one);
  CHECK(prof.c_d == 1.0);
  CHECK(prof.s == 0.0);
}

TEST_CASE("doubling profile is invariant under relabeling") {
  Space g = build_grid(4);
  auto prof = doubling_profile(g);
  CHECK(prof.c_d >= 1.0);
  CHECK(std::isfinite(prof.c_d));
  // relabel points by i -> n-1-i
  int n = g.n();
  std::vector<double> metric(size_t(n) * n);
  std::vector<double> mu(n);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    mu[i] = g.measure(n - 1 - i);
    for (int j = 0; j < n; ++j)
      metric[size_t(i) * n + j] = g.dist(n - 1 - i, n - 1 - j);
  }
  for (const Edge& e : g.edges())
    edges.push_back({n - 1 - e.a, n - 1 - e.b, e.length});
  Space relabeled(std::move(metric), std::move(mu), std::move(edges));
  auto prof2 = doubling_profile(relabeled);
  CHECK(prof2.c_d == doctest::Approx(prof.c_d).epsilon(1e-12));
}

TEST_CASE("discrete gradient on P4") {
  Space p4 = build_path(4, 1.0);
  ScalarField lin = {0, 1, 2, 3};
  auto g = discrete_gradient(p4, lin);
  for (double v : g) CHECK(v == doctest::Approx(1.0));
  ScalarField steps = {0, 0, 1, 1};
  auto g2 = discrete_gradient(p4, steps);
  CHECK(g2[0] == 0.0);
  CHECK(g2[1] == 1.0);
  CHECK(g2[2] == 1.0);
  CHECK(g2[3] == 0.0);
  ScalarField c = {5, 5, 5, 5};
  for (double v : discrete_gradient(p4, c)) CHECK(v == 0.0);
}

TEST_CASE("discrete gradient homogeneity: grad(a f + b) = |a| grad f") {
  Space g = build_cloud(32, 5);
  std::mt19937_64 rng(17);
  ScalarField f(g.n());
  for (auto& v : f) v = double(rng() >> 11) * 0x1.0p-53;
  auto gf = discrete_gradient(g, f);
  ScalarField af(g.n());
  for (int i = 0; i < g.n(); ++i) af[i] = -2.5 * f[i] + 7.0;
  auto gaf = discrete_gradient(g, af);
  for (int i = 0; i < g.n(); ++i)
    CHECK(gaf[i] == doctest::Approx(2.5 * gf[i]).epsilon(1e-12));
}
