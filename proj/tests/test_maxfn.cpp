#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "hs/balls.hpp"
#include "hs/maxfn.hpp"
#include "hs/space.hpp"
#include "naive_lp.hpp"

using namespace hs;

namespace {

struct Fx {
  Space space;
  BallFamily balls;
};

Fx p4() {
  Space s = build_path(4, 1.0);
  BallFamily b = enumerate_balls(s);
  return {std::move(s), std::move(b)};
}

ScalarField random_field(const Space& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ScalarField f(s.n());
  for (auto& v : f) v = double(rng() >> 11) * 0x1.0p-53 * 4 - 2;
  return f;
}

// independent T1-polytope solve on one ball through the naive tableau:
// variables phi = p - q (split), rows: boxes, edge Lipschitz, both signs.
double naive_t1_max(const Space& sp, const Ball& B,
                    const std::vector<double>& w) {
  const int k = int(B.members.size());
  std::vector<int> pos(sp.n(), -1);
  for (int i = 0; i < k; ++i) pos[B.members[i]] = i;
  testlp::DenseLp d;
  d.c.assign(2 * k, 0.0);
  for (int i = 0; i < k; ++i) {
    d.c[i] = w[i];
    d.c[k + i] = -w[i];
  }
  auto row = [&](std::initializer_list<std::pair<int, double>> ent,
                 double rhs) {
    std::vector<double> r(2 * k, 0.0);
    for (auto [j, v] : ent) {
      r[j] = v;
      r[k + j] = -v;
    }
    d.add_row(std::move(r), testlp::Rel::Le, rhs);
  };
  const double lip = 1.0 / (B.radius * B.mass);
  for (int i = 0; i < k; ++i) {
    row({{i, 1.0}}, 1.0 / B.mass);
    row({{i, -1.0}}, 1.0 / B.mass);
  }
  for (const Edge& e : sp.edges()) {
    int u = pos[e.a], v = pos[e.b];
    if (u >= 0 && v >= 0) {
      row({{u, 1.0}, {v, -1.0}}, e.length * lip);
      row({{u, -1.0}, {v, 1.0}}, e.length * lip);
    } else if (u >= 0) {
      row({{u, 1.0}}, e.length * lip);
      row({{u, -1.0}}, e.length * lip);
    } else if (v >= 0) {
      row({{v, 1.0}}, e.length * lip);
      row({{v, -1.0}}, e.length * lip);
    }
  }
  auto res = testlp::solve_dense(d);
  REQUIRE(res.optimal);
  return res.value;
}

}  // namespace

TEST_CASE("hl_maximal on P4: frozen whole-space value and point mass") {
  auto [s, fam] = p4();
  ScalarField f = {0, 1, 2, 3};
  ScalarField m = hl_maximal(s, fam, f);
  CHECK(m[0] == doctest::Approx(1.5).epsilon(1e-14));
  // at the right endpoint the degenerate point mass dominates every ball
  CHECK(m[3] == doctest::Approx(3.0).epsilon(1e-14));
  ScalarField c(4, 2.5);
  for (double v : hl_maximal(s, fam, c)) CHECK(v == doctest::Approx(2.5));
  ScalarField ind = {0, 0, 1, 0};
  ScalarField mi = hl_maximal(s, fam, ind);
  for (int x = 0; x < 4; ++x) CHECK(mi[x] >= ind[x] - 1e-15);
}

TEST_CASE("hl_maximal_q: r=1 reduces to M, brute oracle at r=1/2") {
  auto [s, fam] = p4();
  ScalarField f = {0, 1, 2, 3};
  ScalarField m1 = hl_maximal_q(s, fam, f, 1.0);
  ScalarField m = hl_maximal(s, fam, f);
  for (int x = 0; x < 4; ++x) CHECK(m1[x] == doctest::Approx(m[x]));
  ScalarField mh = hl_maximal_q(s, fam, f, 0.5);
  // oracle: max over balls containing x (and the point itself) of
  // (avg of sqrt f)^2
  for (int x = 0; x < 4; ++x) {
    double best = std::abs(f[x]);
    for (const Ball& B : fam.balls) {
      if (!std::binary_search(B.members.begin(), B.members.end(), x)) continue;
      double acc = 0;
      for (int y : B.members) acc += std::sqrt(std::abs(f[y]));
      acc /= double(B.members.size());
      best = std::max(best, acc * acc);
    }
    CHECK(mh[x] == doctest::Approx(best).epsilon(1e-12));
  }
  CHECK_THROWS(hl_maximal_q(s, fam, f, 0.0));
  CHECK_THROWS(hl_maximal_q(s, fam, f, 1.5));
}

TEST_CASE("sobolev_sharp on P4: frozen values, constants, homogeneity") {
  auto [s, fam] = p4();
  ScalarField f = {0, 1, 2, 3};
  ScalarField nf = sobolev_sharp(s, fam, f);
  for (int x = 0; x < 4; ++x)
    CHECK(nf[x] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  ScalarField c(4, 7.0);
  for (double v : sobolev_sharp(s, fam, c)) CHECK(v == 0.0);
  ScalarField af(4);
  for (int i = 0; i < 4; ++i) af[i] = -3 * f[i] + 11;
  ScalarField naf = sobolev_sharp(s, fam, af);
  for (int x = 0; x < 4; ++x)
    CHECK(naf[x] == doctest::Approx(3 * nf[x]).epsilon(1e-12));
}

TEST_CASE("calderon_star on P4 and the two-sided comparison with N") {
  auto [s, fam] = p4();
  ScalarField f = {0, 1, 2, 3};
  ScalarField st = calderon_star(s, fam, f);
  CHECK(st[0] == doctest::Approx(1.0).epsilon(1e-14));
  ScalarField c(4, 3.0);
  for (double v : calderon_star(s, fam, c)) CHECK(v == 0.0);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Space sp = build_cloud(40, seed);
    BallFamily fb = enumerate_balls(sp);
    ScalarField g = random_field(sp, seed + 100);
    ScalarField nf = sobolev_sharp(sp, fb, g);
    ScalarField fs = calderon_star(sp, fb, g);
    auto prof = doubling_profile(sp);
    double c2 = 1 + 16 * prof.c_d * prof.c_d;
    for (int x = 0; x < sp.n(); ++x) {
      CHECK(nf[x] <= 2 * fs[x] * (1 + 1e-12) + 1e-15);
      CHECK(fs[x] <= c2 * nf[x] * (1 + 1e-9) + 1e-15);
    }
  }
}

TEST_CASE("calderon_star matches a direct per-ball recomputation") {
  Space sp = build_cloud(30, 21);
  BallFamily fam = enumerate_balls(sp);
  ScalarField f = random_field(sp, 5);
  ScalarField fast = calderon_star(sp, fam, f);
  for (int x = 0; x < sp.n(); ++x) {
    double best = 0;
    for (const Ball& B : fam.balls) {
      if (!std::binary_search(B.members.begin(), B.members.end(), x)) continue;
      double acc = 0;
      for (int y : B.members) acc += std::abs(f[y] - f[x]) * sp.measure(y);
      best = std::max(best, acc / (B.mass * B.radius));
    }
    CHECK(fast[x] == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("grand maximal: constants, tent <= exact, point evaluation") {
  auto [s, fam] = p4();
  ScalarField c(4, -1.5);
  ScalarField gc = grand_maximal(s, fam, c, GrandMode::ExactLp);
  for (double v : gc) CHECK(v == doctest::Approx(1.5).epsilon(1e-9));

  ScalarField f = {0, 1, 2, 3};
  ScalarField tent = grand_maximal(s, fam, f, GrandMode::Tent);
  ScalarField lpv = grand_maximal(s, fam, f, GrandMode::ExactLp);
  for (int x = 0; x < 4; ++x) {
    CHECK(tent[x] <= lpv[x] + 1e-9);
    CHECK(std::abs(f[x]) <= lpv[x] + 1e-9);  // point evaluation bound
  }

  Space sp = build_cloud(24, 2);
  BallFamily fb = enumerate_balls(sp);
  ScalarField g = random_field(sp, 7);
  ScalarField tent2 = grand_maximal(sp, fb, g, GrandMode::Tent);
  ScalarField lp2 = grand_maximal(sp, fb, g, GrandMode::ExactLp);
  for (int x = 0; x < sp.n(); ++x) {
    CHECK(tent2[x] <= lp2[x] + 1e-9);
    CHECK(std::abs(g[x]) <= lp2[x] + 1e-9);
  }
}

TEST_CASE("grand maximal exact values agree with the naive LP per ball") {
  for (auto make : {+[] { return build_path(4, 1.0); },
                    +[] { return build_cycle(6); }}) {
    Space sp = make();
    BallFamily fam = enumerate_balls(sp);
    ScalarField f = random_field(sp, 33);
    ScalarField got = grand_maximal(sp, fam, f, GrandMode::ExactLp);
    ScalarField expect(sp.n(), 0.0);
    for (int x = 0; x < sp.n(); ++x) expect[x] = std::abs(f[x]);
    for (const Ball& B : fam.balls) {
      std::vector<double> w(B.members.size());
      for (size_t i = 0; i < B.members.size(); ++i)
        w[i] = f[B.members[i]] * sp.measure(B.members[i]);
      double v = naive_t1_max(sp, B, w);
      for (int y : B.members) expect[y] = std::max(expect[y], v);
    }
    for (int x = 0; x < sp.n(); ++x)
      CHECK(got[x] == doctest::Approx(expect[x]).epsilon(1e-8));
  }
}

TEST_CASE("discrete convolution: partition, global mean, explicit oracle") {
  auto [s, fam] = p4();
  ScalarField c(4, 3.25);
  auto rc = discrete_convolution(s, c, 1.0);
  for (double v : rc.field) CHECK(v == doctest::Approx(3.25).epsilon(1e-13));

  ScalarField f = {0, 1, 2, 3};
  auto rbig = discrete_convolution(s, f, 5.0);
  CHECK(rbig.centers.size() == 1);
  for (double v : rbig.field) CHECK(v == doctest::Approx(1.5).epsilon(1e-13));

  // r = 1: greedy centers in id order with separation > 1 are {0, 2}
  auto r1 = discrete_convolution(s, f, 1.0);
  CHECK(r1.centers == std::vector<int>{0, 2});
  // 3B_0 = {0,1,2,3}, 3B_2 = all as well -> both averages 1.5
  for (double v : r1.field) CHECK(v == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(r1.overlap == 2);
}

TEST_CASE("grad_maximal_star basics") {
  auto [s, fam] = p4();
  ScalarField c(4, 1.0);
  std::vector<double> radii = {0.5, 1.0, 2.0};
  for (double v : grad_maximal_star(s, c, radii)) CHECK(v == 0.0);

  ScalarField f = {0, 1, 2, 3};
  std::vector<double> one = {1.0};
  ScalarField ms = grad_maximal_star(s, f, one);
  GradientField g = discrete_gradient(s, discrete_convolution(s, f, 1.0).field);
  for (int x = 0; x < 4; ++x) CHECK(ms[x] == doctest::Approx(g[x]));
}

namespace {

// vertices of {A phi <= b} in R^d by brute subset enumeration
std::vector<std::vector<double>> polytope_vertices(
    const std::vector<std::vector<double>>& A, const std::vector<double>& b,
    int d) {
  const int m = int(A.size());
  std::vector<std::vector<double>> verts;
  std::vector<int> idx(d);
  auto try_subset = [&](const std::vector<int>& rows) {
    std::vector<std::vector<double>> M(d, std::vector<double>(d + 1, 0.0));
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) M[i][j] = A[rows[i]][j];
      M[i][d] = b[rows[i]];
    }
    // gaussian elimination
    for (int col = 0; col < d; ++col) {
      int piv = -1;
      double best = 1e-9;
      for (int r = col; r < d; ++r)
        if (std::abs(M[r][col]) > best) best = std::abs(M[r][col]), piv = r;
      if (piv < 0) return;
      std::swap(M[col], M[piv]);
      for (int r = 0; r < d; ++r) {
        if (r == col) continue;
        double fct = M[r][col] / M[col][col];
        if (fct == 0) continue;
        for (int j = col; j <= d; ++j) M[r][j] -= fct * M[col][j];
      }
    }
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = M[i][d] / M[i][i];
    for (int r = 0; r < m; ++r) {
      double acc = 0;
      for (int j = 0; j < d; ++j) acc += A[r][j] * x[j];
      if (acc > b[r] + 1e-8) return;
    }
    for (const auto& v : verts) {
      double diff = 0;
      for (int j = 0; j < d; ++j) diff = std::max(diff, std::abs(v[j] - x[j]));
      if (diff < 1e-9) return;
    }
    verts.push_back(std::move(x));
  };
  std::vector<int> comb(d);
  std::function<void(int, int)> rec = [&](int start, int k) {
    if (k == d) {
      try_subset(comb);
      return;
    }
    for (int i = start; i + (d - k - 1) < m; ++i) {
      comb[k] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);
  return verts;
}

// independent Phi-side LP: max sum q_e Phi_e, |Phi| <= 1, |div Phi| <= 1/r
double naive_phi_lp(const Space& sp, double radius,
                    const std::vector<double>& q) {
  const auto& edges = sp.edges();
  const int ne = int(edges.size());
  const int n = sp.n();
  testlp::DenseLp d;
  d.c.assign(2 * ne, 0.0);
  for (int e = 0; e < ne; ++e) {
    d.c[e] = q[e];
    d.c[ne + e] = -q[e];
  }
  for (int e = 0; e < ne; ++e) {
    std::vector<double> r(2 * ne, 0.0);
    r[e] = 1;
    r[ne + e] = -1;
    d.add_row(r, testlp::Rel::Le, 1.0);
    std::vector<double> r2(2 * ne, 0.0);
    r2[e] = -1;
    r2[ne + e] = 1;
    d.add_row(r2, testlp::Rel::Le, 1.0);
  }
  for (int x = 0; x < n; ++x) {
    std::vector<double> row(2 * ne, 0.0);
    for (int ei : sp.incident_edges(x)) {
      const Edge& ed = edges[ei];
      double v = 1.0 / (ed.length * sp.measure(x));
      double sgn = (ed.a == x) ? v : -v;
      row[ei] = sgn;
      row[ne + ei] = -sgn;
    }
    d.add_row(row, testlp::Rel::Le, 1.0 / radius);
    for (double& v : row) v = -v;
    d.add_row(row, testlp::Rel::Le, 1.0 / radius);
  }
  auto res = testlp::solve_dense(d);
  REQUIRE(res.optimal);
  return res.value;
}

}  // namespace

TEST_CASE("grad_plus: vanishing cases and the vertex-pair oracle on P4") {
  auto [s, fam] = p4();
  ScalarField zero(4, 0.0), c(4, 4.0);
  for (double v : grad_plus(s, fam, zero).field) CHECK(v == 0.0);
  for (double v : grad_plus(s, fam, c).field) CHECK(v == 0.0);

  ScalarField f = {0, 1, 2, 3};
  auto gp = grad_plus(s, fam, f);
  CHECK(gp.certified);

  // oracle: per ball, enumerate T1-polytope vertices; the bilinear max over
  // the product polytope is attained at a vertex pair, and for a fixed
  // vertex psi the best Phi is an LP.
  ScalarField oracle(4, 0.0);
  for (const Ball& B : fam.balls) {
    const int k = int(B.members.size());
    std::vector<int> pos(s.n(), -1);
    for (int i = 0; i < k; ++i) pos[B.members[i]] = i;
    std::vector<std::vector<double>> A;
    std::vector<double> rhs;
    const double lip = 1.0 / (B.radius * B.mass);
    auto add = [&](std::initializer_list<std::pair<int, double>> ent,
                   double b) {
      std::vector<double> row(k, 0.0);
      for (auto [j, v] : ent) row[j] = v;
      A.push_back(row);
      rhs.push_back(b);
    };
    for (int i = 0; i < k; ++i) {
      add({{i, 1.0}}, 1.0 / B.mass);
      add({{i, -1.0}}, 1.0 / B.mass);
    }
    for (const Edge& e : s.edges()) {
      int u = pos[e.a], v = pos[e.b];
      if (u >= 0 && v >= 0) {
        add({{u, 1.0}, {v, -1.0}}, e.length * lip);
        add({{u, -1.0}, {v, 1.0}}, e.length * lip);
      } else if (u >= 0) {
        add({{u, 1.0}}, e.length * lip);
        add({{u, -1.0}}, e.length * lip);
      } else if (v >= 0) {
        add({{v, 1.0}}, e.length * lip);
        add({{v, -1.0}}, e.length * lip);
      }
    }
    double best = 0;
    for (const auto& psi : polytope_vertices(A, rhs, k)) {
      std::vector<double> q(s.edges().size(), 0.0);
      for (size_t e = 0; e < s.edges().size(); ++e) {
        const Edge& ed = s.edges()[e];
        double pa = pos[ed.a] >= 0 ? psi[pos[ed.a]] : 0.0;
        double pb = pos[ed.b] >= 0 ? psi[pos[ed.b]] : 0.0;
        double gradf = (f[ed.b] - f[ed.a]) / ed.length;
        q[e] = gradf * 0.5 * (pa + pb);
      }
      best = std::max(best, naive_phi_lp(s, B.radius, q));
    }
    for (int y : B.members) oracle[y] = std::max(oracle[y], best);
  }
  for (int x = 0; x < 4; ++x)
    CHECK(gp.field[x] == doctest::Approx(oracle[x]).epsilon(1e-6));
}

TEST_CASE("contracted sparse T1 solve equals the dense polytope optimum") {
  Space sp = build_cloud(36, 11);
  BallFamily fam = enumerate_balls(sp);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const Ball& B = fam.balls[rng() % fam.balls.size()];
    // sparse weights on a few members
    std::vector<int> support;
    std::vector<double> wsup;
    std::vector<double> wfull(B.members.size(), 0.0);
    int cnt = 1 + int(rng() % 4);
    for (int c = 0; c < cnt; ++c) {
      size_t i = rng() % B.members.size();
      double v = double(rng() >> 11) * 0x1.0p-53 * 2 - 1;
      if (wfull[i] == 0 && v != 0) {
        support.push_back(B.members[i]);
        wsup.push_back(v);
      }
      wfull[i] += v;
      if (wfull[i] == 0) {
        // collapsed to zero; rebuild support list
        support.clear();
        wsup.clear();
        for (size_t j = 0; j < wfull.size(); ++j)
          if (wfull[j] != 0) {
            support.push_back(B.members[j]);
            wsup.push_back(wfull[j]);
          }
      } else if (c > 0) {
        support.clear();
        wsup.clear();
        for (size_t j = 0; j < wfull.size(); ++j)
          if (wfull[j] != 0) {
            support.push_back(B.members[j]);
            wsup.push_back(wfull[j]);
          }
      }
    }
    double dense = detail::t1_polytope_max(sp, B, wfull);
    double sparse = detail::t1_polytope_max_sparse(sp, B, support, wsup);
    CHECK(sparse == doctest::Approx(dense).epsilon(1e-9).scale(1 + dense));
  }
}
