#include "hs/hajlasz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hs/maxfn.hpp"
#include "hs/simplex.hpp"

namespace hs {

HajlaszCertificate hajlasz_norm_lp(const Space& space, const ScalarField& u) {
  const int n = space.n();
  HajlaszCertificate cert;
  cert.g.assign(n, 0.0);
  if (n == 1) return cert;

  // Packing dual of the pair-covering LP: one column per unordered pair,
  // row budget mu(x) per point. Its row multipliers are the optimal g and
  // its objective both certifies and equals the covering optimum.
  lp::Problem p;
  for (int x = 0; x < n; ++x) p.add_row(space.measure(x));
  struct Pair {
    int x, y;
    double w;
  };
  std::vector<Pair> pairs;
  double wmax = 0;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      double w = std::abs(u[x] - u[y]) / space.dist(x, y);
      if (w > 0) {
        pairs.push_back({x, y, w});
        wmax = std::max(wmax, w);
      }
    }
  if (pairs.empty()) {
    cert.slack = 0;
    return cert;  // constant field
  }
  for (const Pair& pr : pairs)
    p.add_col({{{pr.x, 1.0}, {pr.y, 1.0}}, pr.w, lp::kInf});
  lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal)
    throw std::runtime_error("hajlasz LP did not reach optimality");

  cert.g = sol.dual;
  for (double& v : cert.g) v = std::max(v, 0.0);
  cert.value = 0;
  for (int x = 0; x < n; ++x) cert.value += cert.g[x] * space.measure(x);
  cert.dual_bound = sol.objective;
  cert.slack = std::numeric_limits<double>::infinity();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      double s = space.dist(x, y) * (cert.g[x] + cert.g[y]) -
                 std::abs(u[x] - u[y]);
      cert.slack = std::min(cert.slack, s);
    }
  return cert;
}

double mn_constant(const Space& space, const BallFamily& balls,
                   const ScalarField& f) {
  const int n = space.n();
  ScalarField nf = sobolev_sharp(space, balls, f);
  double best = 0;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      double num = std::abs(f[x] - f[y]);
      if (num == 0) continue;
      double den = space.dist(x, y) * (nf[x] + nf[y]);
      if (den == 0) return std::numeric_limits<double>::infinity();
      best = std::max(best, num / den);
    }
  return best;
}

}  // namespace hs
