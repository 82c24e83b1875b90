#pragma once

#include <cstddef>
#include <cstdint>

#include "sfsfd/design.hpp"
#include "sfsfd/random.hpp"
#include "sfsfd/sobol.hpp"

namespace sfsfd {

/// n x d i.i.d. uniform coordinates in [0,1).
DesignMatrix uniform_random_design(std::size_t n, std::size_t d, RandomStream& rng);

/// Classic jittered Latin hypercube: per dimension an independent random
/// permutation p and jitters u give (p(i) + u_i) / n, so every 1D projection
/// has exactly one point in each [k/n, (k+1)/n).
DesignMatrix latin_hypercube_design(std::size_t n, std::size_t d, RandomStream& rng);

/// First n points (index 0 included) of a Sobol sequence randomized per `mode`.
DesignMatrix sobol_design(std::size_t n, std::size_t d, std::uint64_t seed,
                          SobolMode mode = SobolMode::kDigitalShift);

}  // namespace sfsfd
