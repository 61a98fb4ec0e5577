#pragma once

#include "hs/balls.hpp"
#include "hs/space.hpp"

namespace hs {

struct HajlaszCertificate {
  ScalarField g;       // optimal nonnegative pair witness
  double value = 0;    // sum g mu (the exact seminorm)
  double slack = 0;    // min over pairs of d(x,y)(g(x)+g(y)) - |u(x)-u(y)|
  double dual_bound = 0;  // matching-style lower bound from the LP dual
};

/// Exact seminorm: minimize sum g mu over g >= 0 with
/// g(x) + g(y) >= |u(x)-u(y)|/d(x,y) for every pair. Solved through the
/// packing dual (n rows, one column per pair), whose row multipliers are g.
HajlaszCertificate hajlasz_norm_lp(const Space& space, const ScalarField& u);

/// max over pairs of |f(x)-f(y)| / (d(x,y) (Nf(x)+Nf(y))); 0 for constant
/// fields, +inf when a pair has zero denominator but nonzero numerator.
double mn_constant(const Space& space, const BallFamily& balls,
                   const ScalarField& f);

}  // namespace hs
