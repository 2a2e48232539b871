#pragma once

#include <cstdint>

#include "snds/gaussian_mixture.hpp"

namespace snds {

// Equally weighted unit-covariance Gaussians with centers drawn uniformly
// from [-half_width, half_width]^2; the centers depend only on the seed.
GaussianMixture make_random_grid_mixture(int components, double half_width,
                                         double variance, std::uint64_t seed);

// Three equally weighted 2-d modes on the radius-R circle at 90/210/330
// degrees, with isotropic covariances I, I/2, I/4 in angle order.
GaussianMixture make_three_mode_mixture(double radius);

// The diag(1, 0.5) / diag(0.5, 1) centered two-component mixture whose score
// is continuous but not Holder along the diagonal.
GaussianMixture make_non_holder_mixture();

}  // namespace snds
