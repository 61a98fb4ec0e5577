#pragma once

#include <string>
#include <vector>

#include "hs/balls.hpp"
#include "hs/czd.hpp"
#include "hs/space.hpp"

namespace hs {

enum class AtomFlavor { H1, HsMoment, HsSize, HsNonhomog, Ls };

const char* to_string(AtomFlavor f);

struct Atom {
  ScalarField values;
  Ball ball;        // enclosing ball of the support
  double lambda = 0;
  int level = 0;    // dyadic j
  int index = 0;    // k within the level
};

struct AtomicDecomposition {
  AtomFlavor flavor = AtomFlavor::HsMoment;
  double t = 0;        // atom exponent q* = s q / (s - q)
  double q = 0;
  double gamma = 0;    // shared normalizer; 0 for an empty decomposition
  int j_min = 0;
  int j_max = 0;
  std::vector<Atom> atoms;
  ScalarField residual;               // g^{j_min}
  double l1_sum = 0;                  // sum |lambda|
  double l1_ratio = 0;                // l1_sum / ||level integrand||_1
  std::vector<CzDecomposition> levels;  // audit trail, index 0 = j_min
  // per inner level j_min..j_max-1: identity and size diagnostics
  std::vector<double> level_sum_err;   // max |sum_k l_k - (g^{j+1}-g^j)|
  std::vector<double> level_ckl_err;   // max_l |sum_k c_{k,l}|, moment flavors
  std::vector<double> level_sup_ratio; // max_k ||l_k||_inf / 2^j
};

/// Dyadic-level atomic decomposition: one Calderon-Zygmund split per level
/// alpha = 2^j, pre-atoms per flavor, a single gamma across all (j,k) and
/// lambda_{j,k} = gamma 2^j mu(B'). The coarsest good part stays as an
/// explicit residual because the finite total measure stops the downward
/// telescoping.
AtomicDecomposition atomic_decompose(const Space& space,
                                     const BallFamily& balls,
                                     const ScalarField& f, AtomFlavor flavor,
                                     double q, bool tent_grand = false);

struct AtomReport {
  bool pass = false;
  bool support_ok = false;
  int support_violation = -1;  // offending point id, -1 if none
  double size_ratio = 0;       // realized / allowed, per flavor
  double grad_ratio = 0;
  double moment_ratio = 0;     // |sum a mu| / (tol scale), moment flavors
  double l1_ratio = 0;         // ||a||_1 / allowed, size flavors
};

/// Checks the flavor's support, size/gradient, and cancellation/smallness
/// conditions with 1e-9 relative slack.
AtomReport validate_atom(const Space& space, const ScalarField& a,
                         const Ball& ball, AtomFlavor flavor, double t);

struct ReconstructionReport {
  ScalarField field;  // residual + sum lambda a
  double sup_err = 0;
  double l1_err = 0;
  double w11_err = 0;  // ||grad (f - rec)||_1
};

ReconstructionReport reconstruct(const Space& space,
                                 const AtomicDecomposition& dec,
                                 const ScalarField& original);

/// ||a+||_1 with the exact LP grand maximal; the measured H1 atom ->
/// maximal-space inclusion constant.
double h1_atom_grand_maximal_norm(const Space& space, const BallFamily& balls,
                                  const ScalarField& a);

/// Seeded random H1 (1,t)-atom: values on a random enumerated ball,
/// projected to zero mean and normalized to the exact size bound.
struct SeededAtom {
  ScalarField values;
  Ball ball;
};
SeededAtom make_h1_atom(const Space& space, const BallFamily& balls, double t,
                        std::uint64_t seed);

}  // namespace hs
