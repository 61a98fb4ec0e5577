#pragma once

// Serial reference implementations, straight from the definitions with no
// prefix sums, incidence lists or OpenMP. Kept for testing the parallel
// kernels and as the baseline in hs-bench.

#include "hs/balls.hpp"
#include "hs/space.hpp"

namespace hs::ref {

ScalarField hl_maximal(const Space& space, const BallFamily& balls,
                       const ScalarField& f);
ScalarField hl_maximal_q(const Space& space, const BallFamily& balls,
                         const ScalarField& f, double r);
ScalarField sobolev_sharp(const Space& space, const BallFamily& balls,
                          const ScalarField& f);
ScalarField calderon_star(const Space& space, const BallFamily& balls,
                          const ScalarField& f);
ScalarField grand_maximal_tent(const Space& space, const BallFamily& balls,
                               const ScalarField& f);
GradientField discrete_gradient(const Space& space, const ScalarField& f);
DoublingProfile doubling_profile(const Space& space);

}  // namespace hs::ref
