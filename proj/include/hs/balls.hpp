#pragma once

#include <vector>

#include "hs/space.hpp"

namespace hs {

/// Ball with a stored (possibly non-tight) radius. Members are every point
/// within distance radius of the center, ascending by id.
struct Ball {
  int center = -1;
  double radius = 0;
  std::vector<int> members;
  double mass = 0;
};

Ball make_ball(const Space& space, int center, double radius);

/// The canonical finite ball family: for each center c and each distinct
/// positive distance r in {d(c,y) : y != c}, the closed ball (c, r).
/// Singleton member sets cannot occur (the smallest tight radius already
/// reaches another point).
struct BallFamily {
  std::vector<Ball> balls;
  std::vector<std::vector<int>> incident;  // per point: ball ids containing it, ascending

  int size() const { return int(balls.size()); }
};

BallFamily enumerate_balls(const Space& space);

double ball_average(const Space& space, const ScalarField& f, const Ball& ball);

/// Smallest C with (avg_B |f-f_B|^q)^{1/q} <= C r (avg_B |grad f|^q)^{1/q}
/// over the enumerated family; +inf (with witness) when the right side
/// vanishes on a ball with nonzero oscillation. Constant fields give 0.
PoincareResult poincare_constant(const Space& space, const BallFamily& balls,
                                 double q, const ScalarField& f);

}  // namespace hs
