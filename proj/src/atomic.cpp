#include "hs/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "hs/maxfn.hpp"

namespace hs {

const char* to_string(AtomFlavor f) {
  switch (f) {
    case AtomFlavor::H1: return "h1";
    case AtomFlavor::HsMoment: return "hs-moment";
    case AtomFlavor::HsSize: return "hs-size";
    case AtomFlavor::HsNonhomog: return "hs-nonhomog";
    case AtomFlavor::Ls: return "ls";
  }
  return "?";
}

namespace {

double norm_t(const Space& space, const ScalarField& v, double t) {
  if (std::isinf(t)) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double acc = 0;
  for (int x = 0; x < space.n(); ++x)
    acc += std::pow(std::abs(v[x]), t) * space.measure(x);
  return std::pow(acc, 1.0 / t);
}

double norm_1(const Space& space, const ScalarField& v) {
  double acc = 0;
  for (int x = 0; x < space.n(); ++x) acc += std::abs(v[x]) * space.measure(x);
  return acc;
}

CzFlavor cz_flavor_for(AtomFlavor flavor) {
  switch (flavor) {
    case AtomFlavor::HsMoment:
    case AtomFlavor::HsSize: return CzFlavor::Homogeneous;
    case AtomFlavor::HsNonhomog: return CzFlavor::Tilde;
    case AtomFlavor::Ls: return CzFlavor::M11;
    default:
      throw ValidationError("atomic_decompose: unsupported flavor h1");
  }
}

int ceil_log2(double v) {
  int j = int(std::ceil(std::log2(v)));
  while (std::ldexp(1.0, j) < v) ++j;
  while (j > std::numeric_limits<int>::min() + 1 &&
         std::ldexp(1.0, j - 1) >= v)
    --j;
  return j;
}

}  // namespace

AtomicDecomposition atomic_decompose(const Space& space,
                                     const BallFamily& balls,
                                     const ScalarField& f, AtomFlavor flavor,
                                     double q, bool tent_grand) {
  const int n = space.n();
  AtomicDecomposition dec;
  dec.flavor = flavor;
  dec.q = q;

  DoublingProfile prof = doubling_profile(space);
  if (!(q > prof.s / (prof.s + 1) && q < 1))
    throw ValidationError("atomic_decompose: q outside (s/(s+1),1)");
  if (!(q < prof.s))
    throw ValidationError("atomic_decompose: q >= s leaves q* undefined");
  dec.t = prof.s * q / (prof.s - q);

  bool constant = true;
  for (int x = 1; x < n && constant; ++x) constant = (f[x] == f[0]);
  if (constant) {
    dec.residual = f;
    return dec;
  }

  CzFlavor czf = cz_flavor_for(flavor);
  ScalarField h = cz_level_function(space, balls, f, q, czf, tent_grand);
  ScalarField fstar_cache;
  if (czf == CzFlavor::M11) fstar_cache = calderon_star(space, balls, f);
  double hmin = *std::min_element(h.begin(), h.end());
  double hmax = *std::max_element(h.begin(), h.end());
  dec.j_max = ceil_log2(hmax);
  dec.j_min = ceil_log2(hmin);

  // one split per level; each depends only on (f, 2^j), so they can run
  // concurrently
  const int nlev = dec.j_max - dec.j_min + 1;
  dec.levels.assign(nlev, CzDecomposition{});
#pragma omp parallel for schedule(dynamic)
  for (int li = 0; li < nlev; ++li) {
    double alpha = std::ldexp(1.0, dec.j_min + li);
    std::vector<int> omega;
    for (int x = 0; x < n; ++x)
      if (h[x] > alpha) omega.push_back(x);
    dec.levels[li] = cz_decompose_with_omega(
        space, balls, f, q, alpha, czf, std::move(omega), h, tent_grand,
        czf == CzFlavor::M11 ? &fstar_cache : nullptr);
  }

  const bool moment_flavor =
      flavor == AtomFlavor::HsMoment || flavor == AtomFlavor::HsNonhomog;

  struct PreAtom {
    ScalarField values;
    Ball ball;
    int level;
    int index;
  };
  std::vector<PreAtom> pre;

  for (int li = 0; li + 1 < nlev; ++li) {
    const CzDecomposition& Dj = dec.levels[li];
    const CzDecomposition& Dup = dec.levels[li + 1];
    const int mk = int(Dj.b.size());
    const int ml = int(Dup.b.size());
    ScalarField ell(n, 0.0);  // g^{j+1} - g^j
    for (int x = 0; x < n; ++x) ell[x] = Dup.g[x] - Dj.g[x];

    dec.level_sum_err.push_back(0.0);
    dec.level_ckl_err.push_back(0.0);
    dec.level_sup_ratio.push_back(0.0);
    if (mk == 0) continue;  // empty level contributes nothing

    std::vector<double> ckl_table(size_t(mk) * std::max(ml, 1), 0.0);
    std::vector<ScalarField> parts(mk, ScalarField(n, 0.0));
#pragma omp parallel for schedule(static)
    for (int k = 0; k < mk; ++k) {
      if (!moment_flavor) {
        for (int x = 0; x < n; ++x) parts[k][x] = ell[x] * Dj.pu.chi[k][x];
        continue;
      }
      ScalarField& lk = parts[k];
      lk = Dj.b[k];
      for (int l = 0; l < ml; ++l) {
        // c_{k,l} corrections keep each piece mean-free
        double overlap_int = 0;
        bool touches = false;
        for (int x : Dup.cover.covering[l].members) {
          double v = Dup.b[l][x] * Dj.pu.chi[k][x];
          if (v != 0) touches = true;
          overlap_int += v * space.measure(x);
        }
        double chi_mass = 0;
        for (int x : Dup.cover.covering[l].members)
          chi_mass += Dup.pu.chi[l][x] * space.measure(x);
        double ckl = overlap_int / chi_mass;
        if (!touches && ckl == 0) continue;
        ckl_table[size_t(k) * ml + l] = ckl;
        for (int x : Dup.cover.covering[l].members)
          lk[x] += -Dup.b[l][x] * Dj.pu.chi[k][x] + ckl * Dup.pu.chi[l][x];
      }
    }

    // identity diagnostics at this level
    double twoj = std::ldexp(1.0, dec.j_min + li);
    for (int x = 0; x < n; ++x) {
      double acc = -ell[x];
      for (int k = 0; k < mk; ++k) acc += parts[k][x];
      dec.level_sum_err.back() =
          std::max(dec.level_sum_err.back(), std::abs(acc));
    }
    if (moment_flavor) {
      for (int l = 0; l < ml; ++l) {
        double colsum = 0;
        for (int k = 0; k < mk; ++k) colsum += ckl_table[size_t(k) * ml + l];
        dec.level_ckl_err.back() =
            std::max(dec.level_ckl_err.back(), std::abs(colsum));
      }
    }
    for (int k = 0; k < mk; ++k)
      for (int x = 0; x < n; ++x)
        dec.level_sup_ratio.back() = std::max(
            dec.level_sup_ratio.back(), std::abs(parts[k][x]) / twoj);

    for (int k = 0; k < mk; ++k) {
      int center = Dj.cover.covering[k].center;
      double radius = 0;
      bool nonzero = false;
      for (int x = 0; x < n; ++x)
        if (parts[k][x] != 0) {
          nonzero = true;
          radius = std::max(radius, space.dist(center, x));
        }
      if (!nonzero) continue;
      if (radius == 0) radius = space.nearest_distance(center);
      PreAtom pa;
      pa.values = std::move(parts[k]);
      pa.ball = make_ball(space, center, radius);
      pa.level = dec.j_min + li;
      pa.index = k;
      pre.push_back(std::move(pa));
    }
  }

  // shared normalizer: the binding pre-atom meets its bound with ratio one
  double gamma = 0;
  std::vector<double> required(pre.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (size_t i = 0; i < pre.size(); ++i) {
    const PreAtom& pa = pre[i];
    double twoj = std::ldexp(1.0, pa.level);
    double mass_t = std::pow(pa.ball.mass, 1.0 / dec.t);
    GradientField gl = discrete_gradient(space, pa.values);
    ScalarField gl_field(gl.begin(), gl.end());
    double grad_t = norm_t(space, gl_field, dec.t);
    double need = 0;
    switch (flavor) {
      case AtomFlavor::HsMoment:
        need = grad_t / (twoj * mass_t);
        break;
      case AtomFlavor::HsNonhomog:
        need = (norm_t(space, pa.values, dec.t) + grad_t) / (twoj * mass_t);
        break;
      case AtomFlavor::HsSize:
        need = std::max(grad_t / (twoj * mass_t),
                        norm_1(space, pa.values) /
                            (twoj * pa.ball.mass * pa.ball.radius));
        break;
      case AtomFlavor::Ls:
        need = std::max(grad_t / (twoj * mass_t),
                        norm_1(space, pa.values) /
                            (twoj * pa.ball.mass *
                             std::min(1.0, pa.ball.radius)));
        break;
      default: break;
    }
    required[i] = need;
  }
  for (double r : required) gamma = std::max(gamma, r);
  dec.gamma = gamma;

  dec.residual = dec.levels[0].g;  // g^{j_min}
  if (gamma == 0) return dec;       // nothing to emit

  for (auto& pa : pre) {
    Atom a;
    a.lambda = gamma * std::ldexp(1.0, pa.level) * pa.ball.mass;
    a.values.assign(n, 0.0);
    for (int x = 0; x < n; ++x) a.values[x] = pa.values[x] / a.lambda;
    a.ball = std::move(pa.ball);
    a.level = pa.level;
    a.index = pa.index;
    dec.l1_sum += a.lambda;
    dec.atoms.push_back(std::move(a));
  }

  // level integrand mass for the reported ratio
  ScalarField nf = sobolev_sharp(space, balls, f);
  double denom = 0;
  switch (czf) {
    case CzFlavor::Homogeneous:
      denom = norm_1(space, nf);
      break;
    case CzFlavor::Tilde: {
      ScalarField fp = grand_maximal(
          space, balls, f, tent_grand ? GrandMode::Tent : GrandMode::ExactLp);
      for (int x = 0; x < n; ++x)
        denom += (fp[x] + nf[x]) * space.measure(x);
      break;
    }
    case CzFlavor::M11: {
      for (int x = 0; x < n; ++x)
        denom += (std::abs(f[x]) + fstar_cache[x]) * space.measure(x);
      break;
    }
  }
  dec.l1_ratio = denom > 0 ? dec.l1_sum / denom : 0.0;
  return dec;
}

AtomReport validate_atom(const Space& space, const ScalarField& a,
                         const Ball& ball, AtomFlavor flavor, double t) {
  AtomReport rep;
  const double slack = 1 + 1e-9;
  rep.support_ok = true;
  for (int x = 0; x < space.n(); ++x)
    if (a[x] != 0 &&
        !std::binary_search(ball.members.begin(), ball.members.end(), x)) {
      rep.support_ok = false;
      rep.support_violation = x;
      break;
    }

  double tp = std::isinf(t) ? 1.0 : t / (t - 1.0);
  double size_allow = std::pow(ball.mass, -1.0 / tp);
  GradientField g = discrete_gradient(space, a);
  ScalarField gf(g.begin(), g.end());
  double amax = 0;
  for (double v : a) amax = std::max(amax, std::abs(v));
  double moment = 0;
  for (int x = 0; x < space.n(); ++x) moment += a[x] * space.measure(x);
  double moment_scale = 1e-9 * ball.mass * std::max(amax, 1e-300);

  bool ok = rep.support_ok;
  switch (flavor) {
    case AtomFlavor::H1:
      rep.size_ratio = norm_t(space, a, t) / size_allow;
      rep.moment_ratio = std::abs(moment) / moment_scale;
      ok = ok && rep.size_ratio <= slack && rep.moment_ratio <= 1.0;
      break;
    case AtomFlavor::HsMoment:
      rep.grad_ratio = norm_t(space, gf, t) / size_allow;
      rep.moment_ratio = std::abs(moment) / moment_scale;
      ok = ok && rep.grad_ratio <= slack && rep.moment_ratio <= 1.0;
      break;
    case AtomFlavor::HsSize:
      rep.grad_ratio = norm_t(space, gf, t) / size_allow;
      rep.l1_ratio = norm_1(space, a) / ball.radius;
      ok = ok && rep.grad_ratio <= slack && rep.l1_ratio <= slack;
      break;
    case AtomFlavor::HsNonhomog:
      rep.size_ratio =
          (norm_t(space, a, t) + norm_t(space, gf, t)) / size_allow;
      rep.moment_ratio = std::abs(moment) / moment_scale;
      ok = ok && rep.size_ratio <= slack && rep.moment_ratio <= 1.0;
      break;
    case AtomFlavor::Ls:
      rep.grad_ratio = norm_t(space, gf, t) / size_allow;
      rep.l1_ratio = norm_1(space, a) / std::min(1.0, ball.radius);
      ok = ok && rep.grad_ratio <= slack && rep.l1_ratio <= slack;
      break;
  }
  rep.pass = ok;
  return rep;
}

ReconstructionReport reconstruct(const Space& space,
                                 const AtomicDecomposition& dec,
                                 const ScalarField& original) {
  const int n = space.n();
  ReconstructionReport rep;
  rep.field = dec.residual.empty() ? ScalarField(n, 0.0) : dec.residual;
  for (const Atom& a : dec.atoms)
    for (int x = 0; x < n; ++x) rep.field[x] += a.lambda * a.values[x];
  ScalarField diff(n, 0.0);
  for (int x = 0; x < n; ++x) diff[x] = original[x] - rep.field[x];
  for (int x = 0; x < n; ++x)
    rep.sup_err = std::max(rep.sup_err, std::abs(diff[x]));
  rep.l1_err = norm_1(space, diff);
  GradientField g = discrete_gradient(space, diff);
  for (int x = 0; x < n; ++x) rep.w11_err += g[x] * space.measure(x);
  return rep;
}

double h1_atom_grand_maximal_norm(const Space& space, const BallFamily& balls,
                                  const ScalarField& a) {
  ScalarField plus = grand_maximal(space, balls, a, GrandMode::ExactLp);
  return norm_1(space, plus);
}

SeededAtom make_h1_atom(const Space& space, const BallFamily& balls, double t,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
  // sample among moderately sized balls: tight supports are the spiky hard
  // cases for the maximal mass, and they keep the exact LP sweep affordable
  std::vector<int> pool;
  for (int bi = 0; bi < balls.size(); ++bi)
    if (balls.balls[bi].members.size() <= 48) pool.push_back(bi);
  if (pool.empty())
    for (int bi = 0; bi < balls.size(); ++bi) pool.push_back(bi);
  const Ball& B = balls.balls[pool[rng() % pool.size()]];
  SeededAtom atom;
  atom.ball = B;
  atom.values.assign(space.n(), 0.0);
  double mean = 0;
  for (int y : B.members) {
    double v = double(rng() >> 11) * 0x1.0p-53 * 2 - 1;
    atom.values[y] = v;
    mean += v * space.measure(y);
  }
  mean /= B.mass;
  for (int y : B.members) atom.values[y] -= mean;
  double nt = norm_t(space, atom.values, t);
  if (nt == 0) {
    // flat draw; fall back to a two-point difference
    int y0 = B.members.front(), y1 = B.members.back();
    atom.values[y0] = 1.0 / space.measure(y0);
    atom.values[y1] = -1.0 / space.measure(y1);
    nt = norm_t(space, atom.values, t);
  }
  double tp = std::isinf(t) ? 1.0 : t / (t - 1.0);
  double allow = std::pow(B.mass, -1.0 / tp);
  for (double& v : atom.values) v *= allow / nt;
  return atom;
}

}  // namespace hs
