// The OpenMP kernels must agree with the serial reference implementations;
// any divergence is at most floating-point reassociation noise.

#include <cmath>

#include "doctest.h"
#include "hs/balls.hpp"
#include "hs/fields.hpp"
#include "hs/maxfn.hpp"
#include "hs/reference.hpp"

using namespace hs;

namespace {

void compare(const ScalarField& a, const ScalarField& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(tol).scale(1.0));
}

}  // namespace

TEST_CASE("kernels match the reference on mixed fixtures") {
  for (int which = 0; which < 3; ++which) {
    Space s = which == 0   ? build_grid(5)
              : which == 1 ? build_cloud(48, 7)
                           : build_cycle(12);
    BallFamily fam = enumerate_balls(s);
    for (const char* kind : {"bump", "random-lipschitz"}) {
      ScalarField f = generate_field(s, kind, 11);

      compare(hl_maximal(s, fam, f), ref::hl_maximal(s, fam, f), 1e-12);
      compare(hl_maximal_q(s, fam, f, 0.75), ref::hl_maximal_q(s, fam, f, 0.75),
              1e-12);
      compare(sobolev_sharp(s, fam, f), ref::sobolev_sharp(s, fam, f), 1e-12);
      compare(calderon_star(s, fam, f), ref::calderon_star(s, fam, f), 1e-12);
      compare(grand_maximal(s, fam, f, GrandMode::Tent),
              ref::grand_maximal_tent(s, fam, f), 1e-12);

      GradientField g1 = discrete_gradient(s, f);
      GradientField g2 = ref::discrete_gradient(s, f);
      compare(ScalarField(g1.begin(), g1.end()),
              ScalarField(g2.begin(), g2.end()), 1e-12);
    }
    DoublingProfile p1 = doubling_profile(s);
    DoublingProfile p2 = ref::doubling_profile(s);
    CHECK(p1.c_d == doctest::Approx(p2.c_d).epsilon(1e-12));
  }
}
