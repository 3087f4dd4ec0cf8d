#pragma once

#include "infogeo/grid.hpp"
#include "infogeo/quadrature.hpp"

#include <random>

namespace infogeo {

/// Random smooth grid function: a few trigonometric modes plus a damped linear
/// term, each coefficient uniform in [-amplitude, amplitude]. Frequencies stay
/// below 2 so 4th-order stencils resolve them on the default grids.
GridFunction random_smooth_field(const TensorGrid& grid, std::mt19937_64& rng,
                                 double amplitude = 1.0);

/// The same, with E_mu removed.
GridFunction random_centred_field(const WeightedGrid& wg, std::mt19937_64& rng,
                                  double amplitude = 1.0);

}  // namespace infogeo
