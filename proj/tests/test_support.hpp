#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

#include "snds/gaussian_mixture.hpp"
#include "snds/rng.hpp"

namespace snds::test {

// Random SPD matrix with eigenvalues uniform in [lo, hi].
inline Eigen::MatrixXd random_spd(int d, double lo, double hi, Rng& rng) {
  Eigen::MatrixXd gauss(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) gauss(r, c) = rng.normal();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gauss).householderQ();
  Eigen::VectorXd eigs(d);
  for (int k = 0; k < d; ++k) eigs[k] = lo + (hi - lo) * rng.uniform();
  return q * eigs.asDiagonal() * q.transpose();
}

// Random mixture with p components in dimension d; means of scale mean_scale,
// covariance eigenvalues in [lam_lo, lam_hi].
inline GaussianMixture random_mixture(int p, int d, double mean_scale, double lam_lo,
                                      double lam_hi, Rng& rng) {
  std::vector<double> weights(p);
  double sum = 0.0;
  for (int i = 0; i < p; ++i) {
    weights[i] = 0.2 + rng.uniform();
    sum += weights[i];
  }
  for (double& w : weights) w /= sum;

  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
  for (int i = 0; i < p; ++i) {
    Eigen::VectorXd m(d);
    for (int k = 0; k < d; ++k) m[k] = mean_scale * (2.0 * rng.uniform() - 1.0);
    means.push_back(m);
    covs.push_back(random_spd(d, lam_lo, lam_hi, rng));
  }
  return GaussianMixture(std::move(weights), std::move(means), std::move(covs));
}

inline GaussianMixture standard_gaussian(int d) {
  return GaussianMixture({1.0}, {Eigen::VectorXd::Zero(d)},
                         {Eigen::MatrixXd::Identity(d, d)});
}

// Central finite difference of log_density, step 1e-5 max(1, ||x||).
inline Eigen::VectorXd fd_score(const GaussianMixture& gm, const Eigen::VectorXd& x) {
  const double h = 1e-5 * std::max(1.0, x.norm());
  Eigen::VectorXd out(x.size());
  Eigen::VectorXd a = x, b = x;
  for (int i = 0; i < x.size(); ++i) {
    a = x;
    a[i] += h;
    b = x;
    b[i] -= h;
    out[i] = (gm.log_density(a) - gm.log_density(b)) / (2.0 * h);
  }
  return out;
}

}  // namespace snds::test
