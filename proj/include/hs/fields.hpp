#pragma once

#include <cstdint>
#include <string>

#include "hs/space.hpp"

namespace hs {

// Deterministic field generators used by the experiment harness: each
// exercises the maximal operators differently (linear never vanishes,
// bump is compactly supported, the random walk has rough oscillation and
// the smoothed indicator is flat except near one ball).

ScalarField gen_linear(const Space& space);
ScalarField gen_bump(const Space& space, std::uint64_t seed);
ScalarField gen_random_lipschitz(const Space& space, std::uint64_t seed);
ScalarField gen_indicator_smoothed(const Space& space, std::uint64_t seed);

/// Dispatch by name: linear | bump | random-lipschitz | indicator-smoothed.
ScalarField generate_field(const Space& space, const std::string& kind,
                           std::uint64_t seed);

}  // namespace hs
