#include "snds/benchmarks.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "snds/rng.hpp"

namespace snds {

GaussianMixture make_random_grid_mixture(int components, double half_width,
                                         double variance, std::uint64_t seed) {
  if (components < 1) throw std::invalid_argument("make_random_grid_mixture: components >= 1");
  if (!(half_width > 0.0) || !(variance > 0.0))
    throw std::invalid_argument("make_random_grid_mixture: half_width and variance > 0");

  Rng rng = Rng::stream(seed, 0, 0, /*tag=*/0xC0FFEE);
  std::vector<double> weights(components, 1.0 / components);
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
  means.reserve(components);
  covs.reserve(components);
  for (int i = 0; i < components; ++i) {
    Eigen::VectorXd m(2);
    m[0] = (2.0 * rng.uniform() - 1.0) * half_width;
    m[1] = (2.0 * rng.uniform() - 1.0) * half_width;
    means.push_back(m);
    covs.push_back(variance * Eigen::MatrixXd::Identity(2, 2));
  }
  return GaussianMixture(std::move(weights), std::move(means), std::move(covs));
}

GaussianMixture make_three_mode_mixture(double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("make_three_mode_mixture: radius >= 0");

  const double degrees[3] = {90.0, 210.0, 330.0};
  const double variances[3] = {1.0, 0.5, 0.25};
  std::vector<double> weights(3, 1.0 / 3.0);
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
  for (int i = 0; i < 3; ++i) {
    const double ang = degrees[i] * std::numbers::pi / 180.0;
    Eigen::VectorXd m(2);
    m[0] = radius * std::cos(ang);
    m[1] = radius * std::sin(ang);
    means.push_back(m);
    covs.push_back(variances[i] * Eigen::MatrixXd::Identity(2, 2));
  }
  return GaussianMixture(std::move(weights), std::move(means), std::move(covs));
}

GaussianMixture make_non_holder_mixture() {
  std::vector<double> weights = {0.5, 0.5};
  std::vector<Eigen::VectorXd> means = {Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)};
  Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(2, 2);
  s1(0, 0) = 1.0;
  s1(1, 1) = 0.5;
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(2, 2);
  s2(0, 0) = 0.5;
  s2(1, 1) = 1.0;
  return GaussianMixture(std::move(weights), std::move(means), {s1, s2});
}

}  // namespace snds
