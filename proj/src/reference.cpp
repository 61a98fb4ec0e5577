#include "hs/reference.hpp"

#include <algorithm>
#include <cmath>

namespace hs::ref {

namespace {

bool contains(const Ball& b, int x) {
  return std::binary_search(b.members.begin(), b.members.end(), x);
}

}  // namespace

ScalarField hl_maximal(const Space& space, const BallFamily& balls,
                       const ScalarField& f) {
  ScalarField out(space.n());
  for (int x = 0; x < space.n(); ++x) {
    double best = std::abs(f[x]);
    for (const Ball& B : balls.balls) {
      if (!contains(B, x)) continue;
      double acc = 0;
      for (int y : B.members) acc += std::abs(f[y]) * space.measure(y);
      best = std::max(best, acc / B.mass);
    }
    out[x] = best;
  }
  return out;
}

ScalarField hl_maximal_q(const Space& space, const BallFamily& balls,
                         const ScalarField& f, double r) {
  ScalarField fr(space.n());
  for (int i = 0; i < space.n(); ++i) fr[i] = std::pow(std::abs(f[i]), r);
  ScalarField m = hl_maximal(space, balls, fr);
  for (double& v : m) v = std::pow(v, 1.0 / r);
  return m;
}

ScalarField sobolev_sharp(const Space& space, const BallFamily& balls,
                          const ScalarField& f) {
  ScalarField out(space.n(), 0.0);
  for (int x = 0; x < space.n(); ++x) {
    for (const Ball& B : balls.balls) {
      if (!contains(B, x)) continue;
      double fB = 0;
      for (int y : B.members) fB += f[y] * space.measure(y);
      fB /= B.mass;
      double osc = 0;
      for (int y : B.members) osc += std::abs(f[y] - fB) * space.measure(y);
      out[x] = std::max(out[x], osc / (B.mass * B.radius));
    }
  }
  return out;
}

ScalarField calderon_star(const Space& space, const BallFamily& balls,
                          const ScalarField& f) {
  ScalarField out(space.n(), 0.0);
  for (int x = 0; x < space.n(); ++x) {
    for (const Ball& B : balls.balls) {
      if (!contains(B, x)) continue;
      double acc = 0;
      for (int y : B.members) acc += std::abs(f[y] - f[x]) * space.measure(y);
      out[x] = std::max(out[x], acc / (B.mass * B.radius));
    }
  }
  return out;
}

ScalarField grand_maximal_tent(const Space& space, const BallFamily& balls,
                               const ScalarField& f) {
  ScalarField out(space.n());
  for (int x = 0; x < space.n(); ++x) {
    double best = std::abs(f[x]);
    for (const Ball& B : balls.balls) {
      if (!contains(B, x)) continue;
      double acc = 0;
      for (int y : B.members) {
        double t = 1.0 - space.dist(B.center, y) / B.radius;
        if (t > 0) acc += f[y] * t * space.measure(y);
      }
      best = std::max(best, std::abs(acc) / B.mass);
    }
    out[x] = best;
  }
  return out;
}

GradientField discrete_gradient(const Space& space, const ScalarField& f) {
  GradientField g(space.n(), 0.0);
  for (const Edge& e : space.edges()) {
    double slope = std::abs(f[e.a] - f[e.b]) / e.length;
    g[e.a] = std::max(g[e.a], slope);
    g[e.b] = std::max(g[e.b], slope);
  }
  return g;
}

DoublingProfile doubling_profile(const Space& space) {
  const int n = space.n();
  auto mass_at = [&](int x, double r) {
    double m = 0;
    for (int y = 0; y < n; ++y)
      if (space.dist(x, y) <= r) m += space.measure(y);
    return m;
  };
  double c_d = 1.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      for (double r : {space.dist(x, y), space.dist(x, y) / 2}) {
        double lo = mass_at(x, r);
        if (lo > 0) c_d = std::max(c_d, mass_at(x, 2 * r) / lo);
      }
    }
  return {c_d, std::log2(c_d)};
}

}  // namespace hs::ref
