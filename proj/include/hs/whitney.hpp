#pragma once

#include <vector>

#include "hs/balls.hpp"
#include "hs/space.hpp"

namespace hs {

/// Whitney cover of an open set: disjoint underlying balls of radius
/// d(x_i,F)/(2 c1), covering balls of radius r_i = d(x_i,F)/2, with c1 = 4.
struct WhitneyCover {
  std::vector<int> omega;       // sorted point ids
  std::vector<int> complement;  // F, sorted
  std::vector<Ball> underlying;
  std::vector<Ball> covering;
  std::vector<double> radii;    // r_i of the covering balls
  double c1 = 4.0;
  int overlap = 0;              // K: max multiplicity of the covering balls

  bool empty() const { return covering.empty(); }
};

/// Greedy construction over omega in decreasing d(.,F), ties by ascending
/// id. Throws when omega = M (empty complement). omega may be empty.
WhitneyCover whitney_cover(const Space& space, const std::vector<int>& omega);

struct PartitionOfUnity {
  std::vector<ScalarField> chi;     // one per covering ball
  std::vector<double> lipschitz;    // realized max |d chi_i| / d per i
};

/// Normalized tents: chi_i = psi_i / sum psi on omega, 0 on F, with
/// psi_i(y) = max(0, 1 - d(y,x_i)/r_i).
PartitionOfUnity partition_of_unity(const Space& space,
                                    const WhitneyCover& cover);

}  // namespace hs
