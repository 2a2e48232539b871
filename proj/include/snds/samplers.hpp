#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "snds/gaussian_mixture.hpp"
#include "snds/potential.hpp"
#include "snds/score_estimation.hpp"

namespace snds {

// Uniform grid t_k = k T/N for k = 1..N plus per-step sample counts n_k.
struct Schedule {
  double horizon_T = 0.0;
  std::int64_t steps_N = 0;
  std::vector<double> grid;                    // t_1 .. t_N
  std::vector<std::int64_t> particles_per_step;  // n_1 .. n_N

  double step() const { return horizon_T / static_cast<double>(steps_N); }
  std::int64_t total_particles() const;
  void validate() const;
};

// T = log(1/eps), N = ceil(1/eps), n_k = ceil(d eps^-(2d+3)). Fails with the
// theoretical budget in the message when n_k does not fit a 64-bit count.
Schedule schedule_theory(double epsilon, int dim);

// Uniform grid with constant n_k = n.
Schedule schedule_practical(double T, std::int64_t N, std::int64_t n);

struct SampleRun {
  Eigen::MatrixXd samples;  // num_chains x d
  std::uint64_t seed = 0;
  std::uint64_t potential_queries = 0;
  std::uint64_t gradient_queries = 0;
  double wall_seconds = 0.0;
};

// One exact step of the linearized backward SDE dY = (Y + 2 s) dt + sqrt(2) dB
// over duration h with the score frozen at s:
//   e^h y + 2 (e^h - 1) s + sqrt(e^2h - 1) xi.
Eigen::VectorXd reverse_step(const Eigen::VectorXd& y, const Eigen::VectorXd& score,
                             double h, const Eigen::VectorXd& xi);

struct RunOptions {
  // Cap on total queries (evaluations + gradients) across the whole run;
  // exceeding it aborts with BudgetExceeded.
  std::optional<std::uint64_t> query_budget;
};

// Reverse diffusion from Y_0 ~ N(0, I): for k = N down to 1, estimate the
// score at level t_k at the current state and apply reverse_step with
// h = T/N. Chains are independent and every random draw comes from a stream
// keyed by (seed, chain, step), so results do not depend on the execution
// order or the number of worker threads.
SampleRun run_reverse_diffusion(const GaussianMixture& target, const Schedule& schedule,
                                const EstimatorSpec& estimator, std::int64_t num_chains,
                                std::uint64_t seed, const RunOptions& options = {});

// Same driver against a raw potential; the exact oracle is unavailable here.
SampleRun run_reverse_diffusion(const Potential& pot, const Schedule& schedule,
                                const EstimatorSpec& estimator, std::int64_t num_chains,
                                std::uint64_t seed, const RunOptions& options = {});

// Gaussian initialization N(center, sigma^2 I); empty center means origin.
struct GaussianInit {
  Eigen::VectorXd center;
  double sigma = 1.0;
};

// Unadjusted Langevin: x' = x - h grad V(x) + sqrt(2h) xi.
SampleRun run_ula(const Potential& pot, double step_size, std::int64_t steps,
                  std::int64_t num_chains, const GaussianInit& init, std::uint64_t seed,
                  const RunOptions& options = {});

// Reverse diffusion with scores from inner ULA chains on the auxiliary
// distribution (spec.kind must be auxiliary_ula).
SampleRun run_rdmc(const Potential& pot, const Schedule& schedule,
                   const EstimatorSpec& inner, std::int64_t num_chains,
                   std::uint64_t seed, const RunOptions& options = {});

}  // namespace snds
