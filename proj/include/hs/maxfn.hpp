#pragma once

#include <span>
#include <vector>

#include "hs/balls.hpp"
#include "hs/space.hpp"

namespace hs {

// The sup-type operators below run over the canonical ball family plus, for
// the absolute-size operators (M, M_q, f+), the degenerate point mass at the
// evaluation point itself. Without that term a one-point spike x0 has
// Mf(x0) < f(x0) and |f(x0)| <= f+(x0) fails, while N and f* lose nothing
// (their degenerate oscillation is zero).

/// Non-centered Hardy-Littlewood maximal function of |f|.
ScalarField hl_maximal(const Space& space, const BallFamily& balls,
                       const ScalarField& f);

/// M_r f = (M(|f|^r))^{1/r}, 0 < r <= 1.
ScalarField hl_maximal_q(const Space& space, const BallFamily& balls,
                         const ScalarField& f, double r);

/// Radius-normalized mean oscillation sup: max over balls containing x of
/// (1/r) avg_B |f - f_B|.
ScalarField sobolev_sharp(const Space& space, const BallFamily& balls,
                          const ScalarField& f);

/// Like sobolev_sharp with the oscillation measured against f(x):
/// max over balls containing x of (1/r) avg_B |f(y) - f(x)|.
ScalarField calderon_star(const Space& space, const BallFamily& balls,
                          const ScalarField& f);

enum class GrandMode { Tent, ExactLp };

/// Mode used when callers do not care: the per-ball LP is affordable up to
/// n = 128, the tent minorant beyond.
GrandMode default_grand_mode(int n);

/// Grand maximal function: per ball, tent mode evaluates |integral of f
/// against the normalized tent|; exact mode maximizes |sum f psi mu| over
/// the test polytope {supp psi in B, |psi| <= 1/mu(B),
/// |psi(y)-psi(z)| <= d(y,z)/(r mu(B)) per edge} via its flow dual.
ScalarField grand_maximal(const Space& space, const BallFamily& balls,
                          const ScalarField& f, GrandMode mode);

struct ConvolutionResult {
  ScalarField field;          // u_r
  std::vector<int> centers;   // greedy maximal r-separated set, id order
  double radius = 0;
  int overlap = 0;            // max multiplicity of the 6B_j cover
};

/// Discrete convolution u_r: cover by balls of radius r, tents supported in
/// 6B_j (>= 1/2 on 3B_j), u_r = sum of phi_j times the 3B_j averages.
ConvolutionResult discrete_convolution(const Space& space, const ScalarField& f,
                                       double r);

/// Pointwise max over the given radii of |grad u_r|.
ScalarField grad_maximal_star(const Space& space, const ScalarField& f,
                              std::span<const double> radii);

struct GradPlusResult {
  ScalarField field;
  bool certified = true;  // false when some ball hit the alternation cap
};

/// Maximal pairing of the edge gradient against (test function, unit edge
/// field with bounded divergence): per ball a bilinear program solved by
/// alternating LPs to a stationary value.
GradPlusResult grad_plus(const Space& space, const BallFamily& balls,
                         const ScalarField& f);

namespace detail {
/// Value of the exact T1 polytope LP on one ball for objective weights w
/// (maximize |sum_y w_y psi_y|); exposed for the pruning path and tests.
double t1_polytope_max(const Space& space, const Ball& ball,
                       const std::vector<double>& w);

/// One alternation step payload: best psi in the T1 polytope of `ball` for
/// linear weights w (returns the argmax, not just the value).
std::vector<double> t1_polytope_argmax(const Space& space, const Ball& ball,
                                       const std::vector<double>& w,
                                       double* value);

/// Exact sparse-objective value via metric-closure contraction onto the
/// support; equals t1_polytope_max when w vanishes off `support`.
double t1_polytope_max_sparse(const Space& space, const Ball& ball,
                              const std::vector<int>& support,
                              const std::vector<double>& wsup);
}  // namespace detail

}  // namespace hs
