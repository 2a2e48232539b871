#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "snds/gaussian_mixture.hpp"
#include "snds/score_estimation.hpp"

namespace snds {

enum class W2Method {
  auto_select,       // exact when n == m <= 2000, sinkhorn otherwise
  exact_assignment,  // O(n^3) optimal assignment, requires n == m
  sinkhorn,          // entropic approximation, any n, m
};

struct W2Result {
  double distance = 0.0;
  W2Method method = W2Method::exact_assignment;
  std::int64_t iterations = 0;  // sinkhorn only
  double dual_gap = 0.0;        // sinkhorn only: plan cost minus dual value
};

struct SinkhornOptions {
  double epsilon = -1.0;  // <= 0: 0.01 * median pairwise cost
  double marginal_tol = 1e-8;
  std::int64_t max_iterations = 100000;
};

// Empirical W2 between the uniform measures on the rows of A and B, with
// squared Euclidean ground cost; the reported distance is the square root of
// the optimal mean cost.
W2Result wasserstein2(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      W2Method method = W2Method::auto_select,
                      const SinkhornOptions& sinkhorn = {});

// Minimum-cost perfect assignment for a dense square cost matrix; fills
// row_to_col and returns the optimal total cost.
double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>& row_to_col);

struct ScoreMseResult {
  double mse = 0.0;
  double stderr_mse = 0.0;  // standard error over replications
};

// Mean over replications and evaluation points of
// || estimator(z) - exact_oracle(z) ||^2 at noise level t. Evaluation points
// should be drawn from the noised mixture for an L2(p_t)-weighted figure.
ScoreMseResult score_mse(const EstimatorSpec& spec, const GaussianMixture& gm, double t,
                         const Eigen::MatrixXd& eval_points, std::int64_t replications,
                         std::uint64_t seed);

struct ModeCoverage {
  std::vector<double> fraction;  // per center: share of samples nearest & within radius
  double stray = 0.0;            // share farther than radius from every center
  std::int64_t samples = 0;

  int covered(double min_fraction) const;
};

ModeCoverage mode_coverage(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& centers,
                           double radius);

// Mean squared norm of the rows.
double moment2(const Eigen::MatrixXd& samples);

}  // namespace snds
