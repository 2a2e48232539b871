#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "snds/gaussian_mixture.hpp"

namespace snds {

struct CheckPoint {
  Eigen::VectorXd x;
  double statistic;  // measured quantity at x
  double bound;      // value it is compared against
};

struct CheckReport {
  std::string name;
  std::int64_t points_tested = 0;
  double worst_violation = 0.0;  // negative = margin, positive = violation
  double tolerance = 0.0;
  bool passed = false;
  std::vector<CheckPoint> details;
};

// Largest eigenvalue of the finite-difference Hessian of V = -log mu at
// points from the wide envelope N(0, (r_max + 3 sqrt(lambda_max))^2 I),
// compared against beta = 1/lambda_min.
CheckReport check_semi_log_convexity(const GaussianMixture& gm, std::int64_t num_points,
                                     std::uint64_t seed, double tol);

// <grad V(x), x> >= a ||x||^2 - b at envelope points and at directions pushed
// out to radius 10 (r_max + sqrt(lambda_max)).
CheckReport check_dissipativity(const GaussianMixture& gm, std::int64_t num_points,
                                std::uint64_t seed, double tol);

// Empirical second moment against (b + 2d)/a plus three standard errors.
CheckReport check_second_moment(const GaussianMixture& gm, std::int64_t n_samples,
                                std::uint64_t seed);

// Exact scores of the diag(1,.5)/diag(.5,1) mixture on and off the diagonal;
// the first coordinate of -grad log mu(x, x+eta) approaches 2x for large x
// while the diagonal value stays 1.5x, so no Holder modulus fits both.
struct NonHolderRow {
  double x;
  Eigen::Vector2d neg_score_diagonal;   // -grad log mu at (x, x)
  Eigen::Vector2d neg_score_offset;     // -grad log mu at (x, x + eta)
  double first_coordinate_ratio;        // neg_score_offset[0] / x
};

std::vector<NonHolderRow> non_holder_demo(const std::vector<double>& x_values, double eta);

// Monte Carlo Rayleigh quotient Var(f)/E||grad f||^2 for the two-mode target
// 1/2 N(c, lambda_max I) + 1/2 N(-c, lambda_min I), c = R e1, with the
// piecewise-linear test function f(x) = clamp(2 x.e1 / R, -1, 1), reported
// next to the reference constant R^2 e^{R^2/(2 lambda_max)} / 2.
struct PoincareResult {
  double ratio = 0.0;
  double bound = 0.0;
  double variance = 0.0;
  double dirichlet = 0.0;
  std::int64_t samples = 0;
};

PoincareResult poincare_ratio(double c_norm, double lambda_max, double lambda_min, int dim,
                              std::int64_t n_samples, std::uint64_t seed);

}  // namespace snds
