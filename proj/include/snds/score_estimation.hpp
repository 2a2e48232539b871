#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "snds/gaussian_mixture.hpp"
#include "snds/potential.hpp"
#include "snds/rng.hpp"

namespace snds {

inline constexpr double kDefaultTFloor = 1e-4;

enum class EstimatorKind {
  self_normalized_dsi,  // ratio of Gaussian expectations, shared samples
  tsi_gaussian,         // target-score identity with Gaussian proposals
  auxiliary_ula,        // posterior-mean identity, inner ULA chains
  exact_oracle,         // closed form via the noised mixture
};

EstimatorKind estimator_kind_from_string(const std::string& name);
std::string to_string(EstimatorKind kind);

// Forward time t > 0 with cached lambda = e^-2t.
struct NoiseLevel {
  explicit NoiseLevel(double t);

  double t;
  double lambda;
  double one_minus_lambda;
};

enum class AuxInit {
  prior,              // N(x, (1 - lambda) I) in the noised variable
  standard_gaussian,  // standard normal in the clean variable
};

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::self_normalized_dsi;
  std::int64_t particles = 100;
  std::int64_t inner_steps = 0;        // auxiliary_ula only
  double inner_step_size = 0.0;        // auxiliary_ula only
  AuxInit inner_init = AuxInit::prior; // auxiliary_ula only
  double t_floor = kDefaultTFloor;

  void validate() const;
};

// Optional per-call diagnostics.
struct EstimatorStats {
  double max_sample_norm = 0.0;
  double min_potential = 0.0;
  std::int64_t samples = 0;
};

// Self-normalized estimator of grad log p_t at z:
//   -1/(1-e^-2t) * sum_i y_i w_i / sum_i w_i,  w_i = e^{-V(e^t (z - y_i))},
// with y_i ~ N(0, (1-e^-2t) I) drawn fresh from rng. Weights are formed in
// log space relative to min_j V_j, so the ratio never over- or underflows.
// Consumes exactly n evaluate queries.
Eigen::VectorXd self_normalized_score(const Potential& pot, const NoiseLevel& level,
                                      const Eigen::VectorXd& z, std::int64_t n,
                                      Rng& rng, double t_floor = kDefaultTFloor,
                                      EstimatorStats* stats = nullptr);

// Same estimator on caller-provided draws (rows of `samples` are the y_i).
Eigen::VectorXd self_normalized_score(const Potential& pot, const NoiseLevel& level,
                                      const Eigen::VectorXd& z,
                                      const Eigen::MatrixXd& samples,
                                      double t_floor = kDefaultTFloor,
                                      EstimatorStats* stats = nullptr);

// Target-score-identity estimator with standard Gaussian proposals y ~ N(0,I):
// weighted average of (1/sqrt(lambda)) grad log mu((z - sqrt(1-lambda) y)/sqrt(lambda))
// with the same self-normalized weights. Consumes n evaluate + n gradient queries.
Eigen::VectorXd tsi_gaussian_score(const Potential& pot, const NoiseLevel& level,
                                   const Eigen::VectorXd& z, std::int64_t n, Rng& rng,
                                   double t_floor = kDefaultTFloor);

Eigen::VectorXd tsi_gaussian_score(const Potential& pot, const NoiseLevel& level,
                                   const Eigen::VectorXd& z,
                                   const Eigen::MatrixXd& samples,
                                   double t_floor = kDefaultTFloor);

// Posterior-mean identity grad log p_t(z) = (E[y|z] - z)/(1-lambda), with the
// auxiliary expectation estimated by independent inner ULA chains. The chains
// are integrated in the clean variable u = e^t y, where the auxiliary
// potential V(u) + ||e^-t u - z||^2 / (2 (1-lambda)) has curvature bounded
// uniformly in t; the noised-variable form stiffens like e^2t and diverges
// under any fixed step size. Consumes particles * inner_steps gradient queries.
Eigen::VectorXd auxiliary_ula_score(const Potential& pot, const NoiseLevel& level,
                                    const Eigen::VectorXd& z, const EstimatorSpec& spec,
                                    Rng& rng);

// Exact intermediate score of a Gaussian mixture target; zero queries.
Eigen::VectorXd exact_oracle_score(const GaussianMixture& gm, const NoiseLevel& level,
                                   const Eigen::VectorXd& z);

}  // namespace snds
