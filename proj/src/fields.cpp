#include "hs/fields.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "hs/balls.hpp"
#include "hs/maxfn.hpp"

namespace hs {

namespace {

double u01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace

ScalarField gen_linear(const Space& space) {
  ScalarField f(space.n());
  if (space.has_coords()) {
    for (int i = 0; i < space.n(); ++i) f[i] = space.coords()[i][0];
  } else {
    for (int i = 0; i < space.n(); ++i) f[i] = i * space.spacing();
  }
  return f;
}

ScalarField gen_bump(const Space& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  int c = int(rng() % std::uint64_t(space.n()));
  double R = std::max(space.diameter() / 2, space.spacing());
  ScalarField f(space.n());
  for (int i = 0; i < space.n(); ++i)
    f[i] = std::max(0.0, 1.0 - space.dist(i, c) / R);
  return f;
}

ScalarField gen_random_lipschitz(const Space& space, std::uint64_t seed) {
  // cumulative seeded increments along a BFS tree, each bounded by the edge
  // length, so the result is 1-Lipschitz along tree paths
  std::mt19937_64 rng(seed ^ 0x6a09e667f3bcc909ull);
  ScalarField f(space.n(), 0.0);
  std::vector<char> seen(space.n(), 0);
  std::queue<int> bfs;
  bfs.push(0);
  seen[0] = 1;
  while (!bfs.empty()) {
    int x = bfs.front();
    bfs.pop();
    for (int e : space.incident_edges(x)) {
      int y = space.other_end(e, x);
      if (seen[y]) continue;
      seen[y] = 1;
      double d = space.edges()[e].length;
      f[y] = f[x] + (2 * u01(rng) - 1) * d;
      bfs.push(y);
    }
  }
  return f;
}

ScalarField gen_indicator_smoothed(const Space& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xbb67ae8584caa73bull);
  int c = int(rng() % std::uint64_t(space.n()));
  double R = std::max(space.diameter() / 4, space.spacing());
  ScalarField ind(space.n(), 0.0);
  for (int i = 0; i < space.n(); ++i)
    if (space.dist(i, c) <= R) ind[i] = 1.0;
  return discrete_convolution(space, ind, 2 * space.spacing()).field;
}

ScalarField generate_field(const Space& space, const std::string& kind,
                           std::uint64_t seed) {
  if (kind == "linear") return gen_linear(space);
  if (kind == "bump") return gen_bump(space, seed);
  if (kind == "random-lipschitz") return gen_random_lipschitz(space, seed);
  if (kind == "indicator-smoothed") return gen_indicator_smoothed(space, seed);
  throw ValidationError("unknown field generator: " + kind);
}

}  // namespace hs
