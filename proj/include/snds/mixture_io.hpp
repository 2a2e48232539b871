#pragma once

#include <string>

#include <json.hpp>

#include "snds/gaussian_mixture.hpp"

namespace snds {

// Mixture definition object:
//   {"weights": [...], "means": [[...], ...], "covariances": [...]}
// Each covariance entry may be a scalar (sigma^2 I), a vector (diagonal) or a
// full matrix; all are normalized to full matrices on load.
GaussianMixture mixture_from_json(const nlohmann::json& j);
nlohmann::json mixture_to_json(const GaussianMixture& gm);

GaussianMixture load_mixture(const std::string& path);
void save_mixture(const GaussianMixture& gm, const std::string& path);

}  // namespace snds
