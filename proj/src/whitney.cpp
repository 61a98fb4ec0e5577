#include "hs/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hs {

WhitneyCover whitney_cover(const Space& space, const std::vector<int>& omega) {
  WhitneyCover cover;
  cover.omega = omega;
  std::sort(cover.omega.begin(), cover.omega.end());
  cover.omega.erase(std::unique(cover.omega.begin(), cover.omega.end()),
                    cover.omega.end());
  std::vector<char> in_omega(space.n(), 0);
  for (int x : cover.omega) {
    if (x < 0 || x >= space.n()) throw ValidationError("omega id out of range");
    in_omega[x] = 1;
  }
  for (int x = 0; x < space.n(); ++x)
    if (!in_omega[x]) cover.complement.push_back(x);
  if (cover.omega.empty()) return cover;
  if (cover.complement.empty())
    throw ValidationError("whitney_cover: complement empty");

  std::vector<double> dF(cover.omega.size());
  for (size_t i = 0; i < cover.omega.size(); ++i)
    dF[i] = space.dist_to_set(cover.omega[i], cover.complement);

  // decreasing distance to F, ties by ascending id
  std::vector<int> order(cover.omega.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (dF[a] != dF[b]) return dF[a] > dF[b];
    return cover.omega[a] < cover.omega[b];
  });

  for (int oi : order) {
    int x = cover.omega[oi];
    double d = dF[oi];
    Ball under = make_ball(space, x, d / (2 * cover.c1));
    bool disjoint = true;
    for (const Ball& acc : cover.underlying) {
      // member sets are sorted; check intersection
      auto a = under.members.begin();
      auto b = acc.members.begin();
      while (a != under.members.end() && b != acc.members.end()) {
        if (*a == *b) {
          disjoint = false;
          break;
        }
        if (*a < *b)
          ++a;
        else
          ++b;
      }
      if (!disjoint) break;
    }
    if (!disjoint) continue;
    cover.underlying.push_back(std::move(under));
    cover.covering.push_back(make_ball(space, x, d / 2));
    cover.radii.push_back(d / 2);
  }

  std::vector<int> mult(space.n(), 0);
  for (const Ball& B : cover.covering)
    for (int y : B.members) ++mult[y];
  cover.overlap = *std::max_element(mult.begin(), mult.end());
  for (int x : cover.omega)
    if (mult[x] == 0)
      throw ValidationError("whitney_cover: coverage gap at point " +
                            std::to_string(x));
  return cover;
}

PartitionOfUnity partition_of_unity(const Space& space,
                                    const WhitneyCover& cover) {
  if (cover.empty())
    throw ValidationError("partition_of_unity needs a nonempty cover");
  const int n = space.n();
  const int m = int(cover.covering.size());
  PartitionOfUnity pu;
  pu.chi.assign(m, ScalarField(n, 0.0));
  pu.lipschitz.assign(m, 0.0);

  std::vector<double> sum(n, 0.0);
  std::vector<std::vector<double>> psi(m, std::vector<double>());
  for (int i = 0; i < m; ++i) {
    const Ball& B = cover.covering[i];
    psi[i].assign(B.members.size(), 0.0);
    for (size_t k = 0; k < B.members.size(); ++k) {
      int y = B.members[k];
      double t = 1.0 - space.dist(B.center, y) / B.radius;
      if (t > 0) {
        psi[i][k] = t;
        sum[y] += t;
      }
    }
  }
  for (int x : cover.omega)
    if (!(sum[x] > 0))
      throw ValidationError("partition_of_unity: zero tent mass inside omega");

#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    const Ball& B = cover.covering[i];
    for (size_t k = 0; k < B.members.size(); ++k) {
      int y = B.members[k];
      if (psi[i][k] > 0) pu.chi[i][y] = psi[i][k] / sum[y];
    }
    GradientField g = discrete_gradient(space, pu.chi[i]);
    pu.lipschitz[i] = *std::max_element(g.begin(), g.end());
  }
  return pu;
}

}  // namespace hs
