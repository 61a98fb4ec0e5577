#pragma once

#include <string>
#include <vector>

#include "hs/balls.hpp"
#include "hs/space.hpp"
#include "hs/whitney.hpp"

namespace hs {

enum class CzFlavor { Homogeneous, Tilde, M11 };

const char* to_string(CzFlavor f);

/// Midpoint of the admissible exponent interval (s/(s+1), 1).
double default_q(const DoublingProfile& prof);

/// The flavor's level function h: M_q(Nf), M_q(f+ + Nf) or M_q(|f| + f*).
/// Tilde uses the exact LP grand maximal unless tent_grand is set.
ScalarField cz_level_function(const Space& space, const BallFamily& balls,
                              const ScalarField& f, double q, CzFlavor flavor,
                              bool tent_grand = false,
                              ScalarField* integrand_out = nullptr);

/// Strict superlevel set {h > alpha}, ascending ids.
std::vector<int> level_set(const Space& space, const BallFamily& balls,
                           const ScalarField& f, double q, double alpha,
                           CzFlavor flavor, bool tent_grand = false);

struct CzDecomposition {
  double alpha = 0;
  double q = 0;
  CzFlavor flavor = CzFlavor::Homogeneous;
  WhitneyCover cover;
  PartitionOfUnity pu;
  std::vector<double> c;        // per-ball center constants
  std::vector<int> m11_points;  // x_i for the m11 flavor (else empty)
  std::vector<ScalarField> b;   // bad parts, supp b_i in covering ball i
  ScalarField g;                // good part, f - sum b_i
  ScalarField level;            // h, kept for reports
  ScalarField integrand;        // the field under M_q, kept for reports
  bool tent_grand = false;
};

CzDecomposition cz_decompose(const Space& space, const BallFamily& balls,
                             const ScalarField& f, double q, double alpha,
                             CzFlavor flavor, bool tent_grand = false);

/// Same construction against a prescribed superlevel set; cz_decompose
/// forwards here after computing {h > alpha}.
CzDecomposition cz_decompose_with_omega(const Space& space,
                                        const BallFamily& balls,
                                        const ScalarField& f, double q,
                                        double alpha, CzFlavor flavor,
                                        std::vector<int> omega,
                                        ScalarField level,
                                        bool tent_grand = false,
                                        const ScalarField* fstar_hint = nullptr);

struct CzReport {
  double alpha = 0;
  double q = 0;
  CzFlavor flavor = CzFlavor::Homogeneous;
  int ball_count = 0;
  int overlap = 0;                 // K
  double reconstruction_inf = 0;   // ||f - g - sum b_i||_inf
  bool support_exact = true;
  double c_g = 0;                  // ||grad g||_inf / alpha
  double c_g_sup = 0;              // ||g||_inf / alpha (tilde, m11)
  double c_b1 = 0;                 // max_i ||b_i||_1 / (alpha mu(B_i) r_i)
  double c_bq = 0;                 // max_i flavor q-norm / (alpha mu(B_i)^{1/q})
  double c_B = 0;                  // alpha sum mu(B_i) / ||level integrand||_1
  double m11_center_bound = 0;     // max |c_i| / (2 alpha)
  double m11_fstar_bound = 0;      // max f*(x_i) / (c_q alpha)
};

/// Measured constants of a decomposition; nf is the Sobolev sharp field of
/// the same f (reused by callers that already have it).
CzReport verify_cz(const Space& space, const BallFamily& balls,
                   const CzDecomposition& dec, const ScalarField& f,
                   const ScalarField& nf);

/// c_q = (1 - 2^{-q})^{-1/q} (1 + 1e-6), the m11 point-selection ceiling.
double m11_cq(double q);

}  // namespace hs
