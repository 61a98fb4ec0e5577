#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "hs/atomic.hpp"
#include "hs/fields.hpp"
#include "hs/hajlasz.hpp"
#include "hs/maxfn.hpp"

using namespace hs;

namespace {

double linf(const ScalarField& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("constant field: empty decomposition, residual is the field") {
  Space s = build_path(4, 1.0);
  BallFamily fam = enumerate_balls(s);
  ScalarField f(4, 2.0);
  double q = default_q(doubling_profile(s));
  auto dec = atomic_decompose(s, fam, f, AtomFlavor::HsMoment, q);
  CHECK(dec.atoms.empty());
  CHECK(dec.l1_sum == 0.0);
  CHECK(dec.residual == f);
  auto rec = reconstruct(s, dec, f);
  CHECK(rec.sup_err == 0.0);
}

TEST_CASE("atom validator on hand-built fields") {
  Space s = build_path(4, 1.0);
  ScalarField a(4, 0.0);
  // balanced two-point difference inside the ball {0,1,2}
  Ball B = make_ball(s, 1, 1.0);
  a[0] = 1.0;
  a[2] = -1.0;
  // tune to the t = 2 gradient bound: mu(B)^{-1/2} with mass 3
  GradientField g = discrete_gradient(s, a);
  double gt = 0;
  for (int x = 0; x < 4; ++x) gt += g[x] * g[x];
  double scale = std::pow(3.0, -0.5) / std::sqrt(gt);
  for (double& v : a) v *= scale;
  auto rep = validate_atom(s, a, B, AtomFlavor::HsMoment, 2.0);
  CHECK(rep.pass);
  CHECK(rep.grad_ratio == doctest::Approx(1.0).epsilon(1e-12));

  ScalarField zero(4, 0.0);
  for (AtomFlavor fl : {AtomFlavor::H1, AtomFlavor::HsMoment,
                        AtomFlavor::HsSize, AtomFlavor::HsNonhomog,
                        AtomFlavor::Ls})
    CHECK(validate_atom(s, zero, B, fl, 2.0).pass);

  ScalarField bad(a);
  bad[3] = 0.1;  // outside the support ball
  auto rep2 = validate_atom(s, bad, B, AtomFlavor::HsMoment, 2.0);
  CHECK_FALSE(rep2.pass);
  CHECK(rep2.support_violation == 3);
}

TEST_CASE("full decomposition: identities, validation, reconstruction") {
  for (int which = 0; which < 2; ++which) {
    Space s = which ? build_cloud(48, 7) : build_cycle(8);
    BallFamily fam = enumerate_balls(s);
    ScalarField f = which ? gen_random_lipschitz(s, 9) : gen_bump(s, 4);
    double q = default_q(doubling_profile(s));
    for (AtomFlavor fl : {AtomFlavor::HsMoment, AtomFlavor::HsSize,
                          AtomFlavor::HsNonhomog, AtomFlavor::Ls}) {
      auto dec = atomic_decompose(s, fam, f, fl, q);
      INFO("flavor ", to_string(fl), " fixture ", which);
      CHECK(dec.j_min <= dec.j_max);

      double fscale = linf(f);
      for (double e : dec.level_sum_err) CHECK(e <= 1e-12 * (1 + fscale));
      for (double e : dec.level_ckl_err) CHECK(e <= 1e-12 * (1 + fscale));

      for (const Atom& a : dec.atoms) {
        auto rep = validate_atom(s, a.values, a.ball, fl, dec.t);
        CHECK(rep.pass);
      }
      // the shared normalizer makes some atom exactly binding
      if (!dec.atoms.empty()) {
        double worst = 0;
        for (const Atom& a : dec.atoms) {
          auto rep = validate_atom(s, a.values, a.ball, fl, dec.t);
          worst = std::max({worst, rep.size_ratio, rep.grad_ratio,
                            rep.l1_ratio});
        }
        CHECK(worst == doctest::Approx(1.0).epsilon(1e-9));
      }

      auto rec = reconstruct(s, dec, f);
      CHECK(rec.sup_err <= 1e-9 * (1 + fscale));
      CHECK(rec.l1_err <= 1e-9 * (1 + fscale) * s.total_measure());
      CHECK(rec.w11_err <= 1e-9 * (1 + fscale) * s.total_measure());

      // dropping one atom loses exactly its mass
      if (!dec.atoms.empty()) {
        AtomicDecomposition cut = dec;
        Atom dropped = cut.atoms.back();
        cut.atoms.pop_back();
        auto rec2 = reconstruct(s, cut, f);
        ScalarField lost(s.n(), 0.0);
        for (int x = 0; x < s.n(); ++x)
          lost[x] = dropped.lambda * dropped.values[x];
        CHECK(rec2.sup_err ==
              doctest::Approx(linf(lost)).epsilon(1e-6).scale(1 + fscale));
      }
    }
  }
}

TEST_CASE("doubling the field shifts the dyadic grid by one") {
  Space s = build_cycle(8);
  BallFamily fam = enumerate_balls(s);
  ScalarField f = gen_bump(s, 4);
  double q = default_q(doubling_profile(s));
  auto d1 = atomic_decompose(s, fam, f, AtomFlavor::HsMoment, q);
  ScalarField f2(f);
  for (double& v : f2) v *= 2;
  auto d2 = atomic_decompose(s, fam, f2, AtomFlavor::HsMoment, q);
  CHECK(d2.j_min == d1.j_min + 1);
  CHECK(d2.j_max == d1.j_max + 1);
  REQUIRE(d2.atoms.size() == d1.atoms.size());
  CHECK(d2.l1_sum == doctest::Approx(2 * d1.l1_sum).epsilon(1e-9));
  for (size_t i = 0; i < d1.atoms.size(); ++i) {
    CHECK(d2.atoms[i].lambda ==
          doctest::Approx(2 * d1.atoms[i].lambda).epsilon(1e-9));
    for (int x = 0; x < s.n(); ++x)
      CHECK(d2.atoms[i].values[x] ==
            doctest::Approx(d1.atoms[i].values[x]).epsilon(1e-9));
  }
}

TEST_CASE("l1 control against the Sobolev sharp mass") {
  Space s = build_cloud(48, 7);
  BallFamily fam = enumerate_balls(s);
  ScalarField f = gen_bump(s, 6);
  double q = default_q(doubling_profile(s));
  ScalarField nf = sobolev_sharp(s, fam, f);
  double nf1 = 0;
  for (int x = 0; x < s.n(); ++x) nf1 += nf[x] * s.measure(x);
  auto dec = atomic_decompose(s, fam, f, AtomFlavor::HsMoment, q);
  CHECK(dec.l1_sum <= 1e3 * nf1);
  // residual gradient stays at the coarsest scale
  GradientField gr = discrete_gradient(s, dec.residual);
  double twoj = std::ldexp(1.0, dec.j_min);
  CHECK(linf(ScalarField(gr.begin(), gr.end())) <= 1e3 * twoj);
}

TEST_CASE("seeded H1 atoms validate and have finite maximal mass") {
  Space s = build_cycle(8);
  BallFamily fam = enumerate_balls(s);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    SeededAtom atom = make_h1_atom(s, fam, 2.0, seed);
    auto rep = validate_atom(s, atom.values, atom.ball, AtomFlavor::H1, 2.0);
    CHECK(rep.pass);
    double norm = h1_atom_grand_maximal_norm(s, fam, atom.values);
    CHECK(norm > 0);
    CHECK(norm <= 1e2);
    // halving the atom halves the norm
    ScalarField half(atom.values);
    for (double& v : half) v *= 0.5;
    CHECK(h1_atom_grand_maximal_norm(s, fam, half) ==
          doctest::Approx(0.5 * norm).epsilon(1e-9));
  }
}
