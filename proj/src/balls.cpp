#include "hs/balls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hs {

Ball make_ball(const Space& space, int center, double radius) {
  if (center < 0 || center >= space.n())
    throw ValidationError("ball center out of range");
  if (!(radius > 0)) throw ValidationError("ball radius must be positive");
  Ball b;
  b.center = center;
  b.radius = radius;
  for (int y = 0; y < space.n(); ++y)
    if (space.dist(center, y) <= radius) {
      b.members.push_back(y);
      b.mass += space.measure(y);
    }
  return b;
}

BallFamily enumerate_balls(const Space& space) {
  const int n = space.n();
  BallFamily fam;
  for (int c = 0; c < n; ++c) {
    std::vector<double> radii;
    radii.reserve(n - 1);
    for (int y = 0; y < n; ++y)
      if (y != c) radii.push_back(space.dist(c, y));
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    for (double r : radii) fam.balls.push_back(make_ball(space, c, r));
  }
  fam.incident.assign(n, {});
  for (int bi = 0; bi < fam.size(); ++bi)
    for (int y : fam.balls[bi].members) fam.incident[y].push_back(bi);
  return fam;
}

double ball_average(const Space& space, const ScalarField& f, const Ball& ball) {
  double num = 0;
  for (int y : ball.members) num += f[y] * space.measure(y);
  return num / ball.mass;
}

PoincareResult poincare_constant(const Space& space, const BallFamily& balls,
                                 double q, const ScalarField& f) {
  if (!(q >= 1)) throw ValidationError("poincare_constant needs q >= 1");
  GradientField grad = discrete_gradient(space, f);
  PoincareResult res{0.0, -1, 0.0};
  for (const Ball& B : balls.balls) {
    double fB = ball_average(space, f, B);
    double lhs_q = 0, rhs_q = 0;
    for (int y : B.members) {
      lhs_q += std::pow(std::abs(f[y] - fB), q) * space.measure(y);
      rhs_q += std::pow(grad[y], q) * space.measure(y);
    }
    double lhs = std::pow(lhs_q / B.mass, 1.0 / q);
    double rhs = B.radius * std::pow(rhs_q / B.mass, 1.0 / q);
    if (rhs > 0) {
      double ratio = lhs / rhs;
      if (ratio > res.constant) {
        res = {ratio, B.center, B.radius};
      }
    } else if (lhs > 0) {
      return {std::numeric_limits<double>::infinity(), B.center, B.radius};
    }
  }
  return res;
}

}  // namespace hs
