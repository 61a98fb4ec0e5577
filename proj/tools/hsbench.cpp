// Timing comparison of the OpenMP kernels against the serial reference
// implementations on cloud fixtures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hs/balls.hpp"
#include "hs/fields.hpp"
#include "hs/maxfn.hpp"
#include "hs/reference.hpp"

using namespace hs;
using clk = std::chrono::steady_clock;

namespace {

double bench(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = clk::now();
    fn();
    best = std::min(best,
                    std::chrono::duration<double>(clk::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> sizes = {64, 128, 256};
  if (argc > 1) {
    sizes.clear();
    for (int i = 1; i < argc; ++i) sizes.push_back(std::atoi(argv[i]));
  }
  std::printf("%-10s %-14s %12s %12s %8s\n", "fixture", "kernel",
              "serial [ms]", "openmp [ms]", "speedup");
  for (int n : sizes) {
    Space s = build_cloud(n, 7);
    BallFamily fam = enumerate_balls(s);
    ScalarField f = gen_random_lipschitz(s, 9);
    int reps = n <= 128 ? 3 : 2;

    struct Row {
      const char* name;
      std::function<void()> serial, par;
    };
    ScalarField sink;
    GradientField gsink;
    DoublingProfile psink;
    std::vector<Row> rows = {
        {"hl-maximal", [&] { sink = ref::hl_maximal(s, fam, f); },
         [&] { sink = hl_maximal(s, fam, f); }},
        {"sobolev-N", [&] { sink = ref::sobolev_sharp(s, fam, f); },
         [&] { sink = sobolev_sharp(s, fam, f); }},
        {"calderon-*", [&] { sink = ref::calderon_star(s, fam, f); },
         [&] { sink = calderon_star(s, fam, f); }},
        {"grand-tent", [&] { sink = ref::grand_maximal_tent(s, fam, f); },
         [&] { sink = grand_maximal(s, fam, f, GrandMode::Tent); }},
        {"gradient", [&] { gsink = ref::discrete_gradient(s, f); },
         [&] { gsink = discrete_gradient(s, f); }},
        {"doubling", [&] { psink = ref::doubling_profile(s); },
         [&] { psink = doubling_profile(s); }},
    };
    for (auto& r : rows) {
      double ts = bench(reps, r.serial);
      double tp = bench(reps, r.par);
      std::printf("cloud%-5d %-14s %12.2f %12.2f %7.2fx\n", n, r.name,
                  ts * 1e3, tp * 1e3, ts / tp);
    }
  }
  return 0;
}
