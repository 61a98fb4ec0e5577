#include "hs/czd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hs/maxfn.hpp"

namespace hs {

const char* to_string(CzFlavor f) {
  switch (f) {
    case CzFlavor::Homogeneous: return "homog";
    case CzFlavor::Tilde: return "tilde";
    case CzFlavor::M11: return "m11";
  }
  return "?";
}

double default_q(const DoublingProfile& prof) {
  return (prof.s / (prof.s + 1) + 1.0) / 2.0;
}

double m11_cq(double q) {
  return std::pow(1.0 - std::pow(2.0, -q), -1.0 / q) * (1.0 + 1e-6);
}

namespace {

void check_q(const Space& space, double q) {
  double s = doubling_profile(space).s;
  if (!(q > s / (s + 1) && q < 1))
    throw ValidationError("q=" + std::to_string(q) +
                          " outside the admissible interval (s/(s+1),1), s=" +
                          std::to_string(s));
}

ScalarField level_integrand(const Space& space, const BallFamily& balls,
                            const ScalarField& f, CzFlavor flavor,
                            bool tent_grand) {
  const int n = space.n();
  ScalarField out(n, 0.0);
  switch (flavor) {
    case CzFlavor::Homogeneous:
      return sobolev_sharp(space, balls, f);
    case CzFlavor::Tilde: {
      ScalarField nf = sobolev_sharp(space, balls, f);
      GrandMode mode = tent_grand ? GrandMode::Tent : GrandMode::ExactLp;
      ScalarField fp = grand_maximal(space, balls, f, mode);
      for (int i = 0; i < n; ++i) out[i] = fp[i] + nf[i];
      return out;
    }
    case CzFlavor::M11: {
      ScalarField fs = calderon_star(space, balls, f);
      for (int i = 0; i < n; ++i) out[i] = std::abs(f[i]) + fs[i];
      return out;
    }
  }
  return out;
}

}  // namespace

ScalarField cz_level_function(const Space& space, const BallFamily& balls,
                              const ScalarField& f, double q, CzFlavor flavor,
                              bool tent_grand, ScalarField* integrand_out) {
  check_q(space, q);
  ScalarField integrand = level_integrand(space, balls, f, flavor, tent_grand);
  ScalarField h = hl_maximal_q(space, balls, integrand, q);
  if (integrand_out) *integrand_out = std::move(integrand);
  return h;
}

std::vector<int> level_set(const Space& space, const BallFamily& balls,
                           const ScalarField& f, double q, double alpha,
                           CzFlavor flavor, bool tent_grand) {
  if (!(alpha > 0)) throw ValidationError("level_set needs alpha > 0");
  ScalarField h = cz_level_function(space, balls, f, q, flavor, tent_grand);
  std::vector<int> omega;
  for (int x = 0; x < space.n(); ++x)
    if (h[x] > alpha) omega.push_back(x);
  return omega;
}

CzDecomposition cz_decompose(const Space& space, const BallFamily& balls,
                             const ScalarField& f, double q, double alpha,
                             CzFlavor flavor, bool tent_grand) {
  if (!(alpha > 0)) throw ValidationError("cz_decompose needs alpha > 0");
  check_q(space, q);
  ScalarField integrand;
  ScalarField h =
      cz_level_function(space, balls, f, q, flavor, tent_grand, &integrand);
  std::vector<int> omega;
  for (int x = 0; x < space.n(); ++x)
    if (h[x] > alpha) omega.push_back(x);
  CzDecomposition dec =
      cz_decompose_with_omega(space, balls, f, q, alpha, flavor,
                              std::move(omega), std::move(h), tent_grand);
  dec.integrand = std::move(integrand);
  return dec;
}

CzDecomposition cz_decompose_with_omega(const Space& space,
                                        const BallFamily& balls,
                                        const ScalarField& f, double q,
                                        double alpha, CzFlavor flavor,
                                        std::vector<int> omega,
                                        ScalarField level, bool tent_grand,
                                        const ScalarField* fstar_hint) {
  const int n = space.n();
  CzDecomposition dec;
  dec.alpha = alpha;
  dec.q = q;
  dec.flavor = flavor;
  dec.level = std::move(level);
  dec.tent_grand = tent_grand;

  if (omega.empty()) {
    dec.g = f;  // g = f, no bad parts
    return dec;
  }
  if (int(omega.size()) == n)
    throw ValidationError("cz_decompose: complement empty");

  dec.cover = whitney_cover(space, omega);
  dec.pu = partition_of_unity(space, dec.cover);
  const int m = int(dec.cover.covering.size());
  dec.c.assign(m, 0.0);
  dec.b.assign(m, ScalarField(n, 0.0));

  ScalarField fstar;
  if (flavor == CzFlavor::M11) {
    fstar = fstar_hint ? *fstar_hint : calderon_star(space, balls, f);
    dec.m11_points.assign(m, -1);
  }

  int m11_failure = -1;
#pragma omp parallel for schedule(static) reduction(max : m11_failure)
  for (int i = 0; i < m; ++i) {
    const Ball& Bi = dec.cover.covering[i];
    if (flavor == CzFlavor::M11) {
      // candidate set: the F-reaching dilation 2B_i, restricted to
      // |f| <= 2 alpha; take the smallest Calderon value, ties by id
      Ball reach = make_ball(space, Bi.center, 2 * Bi.radius);
      int pick = -1;
      for (int y : reach.members) {
        if (std::abs(f[y]) > 2 * alpha) continue;
        if (pick < 0 || fstar[y] < fstar[pick]) pick = y;
      }
      if (pick < 0) {
        m11_failure = std::max(m11_failure, i);
        continue;
      }
      dec.m11_points[i] = pick;
      dec.c[i] = f[pick];
    } else {
      double num = 0, den = 0;
      for (int y : Bi.members) {
        double w = dec.pu.chi[i][y] * space.measure(y);
        num += f[y] * w;
        den += w;
      }
      dec.c[i] = num / den;
    }
    for (int y : Bi.members)
      if (dec.pu.chi[i][y] != 0)
        dec.b[i][y] = (f[y] - dec.c[i]) * dec.pu.chi[i][y];
  }

  if (m11_failure >= 0) {
    const Ball& Bi = dec.cover.covering[m11_failure];
    Ball reach = make_ball(space, Bi.center, 2 * Bi.radius);
    double frac = 0;
    for (int y : reach.members)
      if (std::abs(f[y]) <= 2 * alpha) frac += space.measure(y);
    frac /= reach.mass;
    throw std::runtime_error(
        "m11 selection empty on ball " + std::to_string(m11_failure) +
        ": candidate mass fraction " + std::to_string(frac) +
        " (need > 1 - 2^-q = " + std::to_string(1 - std::pow(2.0, -q)) + ")");
  }

  dec.g.assign(n, 0.0);
  for (int x = 0; x < n; ++x) {
    double acc = f[x];
    for (int i = 0; i < m; ++i) acc -= dec.b[i][x];
    dec.g[x] = acc;
  }
  return dec;
}

namespace {

double norm_q(const Space& space, const ScalarField& v, double q) {
  double acc = 0;
  for (int x = 0; x < space.n(); ++x)
    acc += std::pow(std::abs(v[x]), q) * space.measure(x);
  return std::pow(acc, 1.0 / q);
}

}  // namespace

CzReport verify_cz(const Space& space, const BallFamily& balls,
                   const CzDecomposition& dec, const ScalarField& f,
                   const ScalarField& nf) {
  const int n = space.n();
  CzReport rep;
  rep.alpha = dec.alpha;
  rep.q = dec.q;
  rep.flavor = dec.flavor;
  rep.ball_count = int(dec.b.size());
  rep.overlap = dec.cover.overlap;

  // reconstruction residual
  for (int x = 0; x < n; ++x) {
    double acc = f[x] - dec.g[x];
    for (const auto& b : dec.b) acc -= b[x];
    rep.reconstruction_inf = std::max(rep.reconstruction_inf, std::abs(acc));
  }

  for (size_t i = 0; i < dec.b.size(); ++i) {
    const auto& mem = dec.cover.covering[i].members;
    for (int x = 0; x < n; ++x)
      if (dec.b[i][x] != 0 &&
          !std::binary_search(mem.begin(), mem.end(), x))
        rep.support_exact = false;
  }

  GradientField gg = discrete_gradient(space, dec.g);
  for (int x = 0; x < n; ++x) {
    rep.c_g = std::max(rep.c_g, gg[x] / dec.alpha);
    rep.c_g_sup = std::max(rep.c_g_sup, std::abs(dec.g[x]) / dec.alpha);
  }

  double mass_sum = 0;
  for (size_t i = 0; i < dec.b.size(); ++i) {
    const Ball& Bi = dec.cover.covering[i];
    mass_sum += Bi.mass;
    double b1 = 0;
    for (int y : Bi.members) b1 += std::abs(dec.b[i][y]) * space.measure(y);
    rep.c_b1 = std::max(rep.c_b1, b1 / (dec.alpha * Bi.mass * Bi.radius));

    GradientField gb = discrete_gradient(space, dec.b[i]);
    ScalarField combined(n, 0.0);
    for (int x = 0; x < n; ++x)
      combined[x] = (dec.flavor == CzFlavor::Homogeneous)
                        ? gb[x]
                        : std::abs(dec.b[i][x]) + gb[x];
    rep.c_bq = std::max(rep.c_bq,
                        norm_q(space, combined, dec.q) /
                            (dec.alpha * std::pow(Bi.mass, 1.0 / dec.q)));
  }

  // level integrand: stored at decomposition time, otherwise recovered
  ScalarField integrand = dec.integrand;
  if (integrand.empty()) {
    switch (dec.flavor) {
      case CzFlavor::Homogeneous: integrand = nf; break;
      case CzFlavor::Tilde: {
        ScalarField fp = grand_maximal(
            space, balls, f,
            dec.tent_grand ? GrandMode::Tent : GrandMode::ExactLp);
        integrand.assign(n, 0.0);
        for (int x = 0; x < n; ++x) integrand[x] = fp[x] + nf[x];
        break;
      }
      case CzFlavor::M11: {
        ScalarField fs = calderon_star(space, balls, f);
        integrand.assign(n, 0.0);
        for (int x = 0; x < n; ++x) integrand[x] = std::abs(f[x]) + fs[x];
        break;
      }
    }
  }
  double l1 = 0;
  for (int x = 0; x < n; ++x) l1 += integrand[x] * space.measure(x);
  rep.c_B = l1 > 0 ? dec.alpha * mass_sum / l1 : 0.0;

  if (dec.flavor == CzFlavor::M11 && !dec.m11_points.empty()) {
    // f* recovered from the stored integrand |f| + f*
    double cq = m11_cq(dec.q);
    for (size_t i = 0; i < dec.b.size(); ++i) {
      int xi = dec.m11_points[i];
      double fs_xi = integrand[xi] - std::abs(f[xi]);
      rep.m11_center_bound =
          std::max(rep.m11_center_bound, std::abs(dec.c[i]) / (2 * dec.alpha));
      rep.m11_fstar_bound =
          std::max(rep.m11_fstar_bound, fs_xi / (cq * dec.alpha));
    }
  }
  return rep;
}

}  // namespace hs
