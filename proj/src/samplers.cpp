#include "snds/samplers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "snds/errors.hpp"
#include "snds/parallel.hpp"

namespace snds {

namespace {

// Substream tags; chains and steps index the other two stream slots.
constexpr std::uint64_t kTagInit = 0;
constexpr std::uint64_t kTagEstimator = 1;
constexpr std::uint64_t kTagStepNoise = 2;

// ceil with a snap for values that are integers up to float rounding, so
// formula-derived counts like (1/0.1)^5 come out exact.
double snapped_ceil(double v) {
  const double nearest = std::round(v);
  if (std::abs(v - nearest) <= 1e-9 * std::max(1.0, std::abs(v))) return nearest;
  return std::ceil(v);
}

std::chrono::steady_clock::time_point now() { return std::chrono::steady_clock::now(); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(now() - start).count();
}

void check_budget(const Potential* pot, const RunOptions& options,
                  const QueryCounts& start) {
  if (!options.query_budget || pot == nullptr) return;
  const QueryCounts current = pot->queries();
  const std::uint64_t consumed = current.total() - start.total();
  if (consumed > *options.query_budget)
    throw BudgetExceeded("query budget exceeded: " + std::to_string(consumed) + " > " +
                             std::to_string(*options.query_budget),
                         consumed, *options.query_budget);
}

struct ReverseTarget {
  const Potential* pot = nullptr;        // required for Monte Carlo estimators
  const GaussianMixture* gm = nullptr;   // required for the exact oracle
};

SampleRun run_reverse_diffusion_impl(const ReverseTarget& target, const Schedule& schedule,
                                     const EstimatorSpec& estimator,
                                     std::int64_t num_chains, std::uint64_t seed,
                                     const RunOptions& options) {
  schedule.validate();
  estimator.validate();
  if (num_chains < 1)
    throw std::invalid_argument("run_reverse_diffusion: num_chains must be >= 1");

  const bool oracle = estimator.kind == EstimatorKind::exact_oracle;
  if (oracle && target.gm == nullptr)
    throw ConfigError("run_reverse_diffusion: exact_oracle requires a mixture target");
  if (!oracle && target.pot == nullptr)
    throw ConfigError("run_reverse_diffusion: Monte Carlo estimator requires a potential");
  if (estimator.kind == EstimatorKind::tsi_gaussian && !target.pot->has_gradient())
    throw GradientUnavailable("run_reverse_diffusion: tsi_gaussian needs a gradient");
  if (estimator.kind == EstimatorKind::auxiliary_ula && !target.pot->has_gradient())
    throw GradientUnavailable("run_reverse_diffusion: auxiliary_ula needs a gradient");

  const std::int64_t N = schedule.steps_N;
  const double h = schedule.step();
  const int d = oracle ? target.gm->dim() : target.pot->dim();

  std::vector<NoiseLevel> levels;
  levels.reserve(N);
  for (std::int64_t k = 0; k < N; ++k) levels.emplace_back(schedule.grid[k]);
  for (const NoiseLevel& level : levels)
    if (level.t < estimator.t_floor)
      throw ConfigError("run_reverse_diffusion: grid time " + std::to_string(level.t) +
                        " below estimator t_floor");

  // The oracle path reuses the noised mixtures across chains and steps.
  std::vector<GaussianMixture> noised;
  if (oracle) {
    noised.reserve(N);
    for (std::int64_t k = 0; k < N; ++k) noised.push_back(target.gm->noised(levels[k].t));
  }

  const QueryCounts start_counts = target.pot ? target.pot->queries() : QueryCounts{};
  const auto start_time = now();

  Eigen::MatrixXd samples(num_chains, d);
  parallel_for(0, num_chains, [&](std::int64_t chain) {
    Eigen::VectorXd y(d), xi(d), score(d);
    {
      Rng rng = Rng::stream(seed, chain, 0, kTagInit);
      rng.normal_fill(y);
    }
    for (std::int64_t k = N; k >= 1; --k) {
      const NoiseLevel& level = levels[k - 1];
      const std::int64_t n_k = schedule.particles_per_step[k - 1];
      try {
        Rng est_rng = Rng::stream(seed, chain, static_cast<std::uint64_t>(k), kTagEstimator);
        switch (estimator.kind) {
          case EstimatorKind::self_normalized_dsi:
            score = self_normalized_score(*target.pot, level, y, n_k, est_rng,
                                          estimator.t_floor);
            break;
          case EstimatorKind::tsi_gaussian:
            score = tsi_gaussian_score(*target.pot, level, y, n_k, est_rng,
                                       estimator.t_floor);
            break;
          case EstimatorKind::auxiliary_ula: {
            EstimatorSpec inner = estimator;
            inner.particles = n_k;
            score = auxiliary_ula_score(*target.pot, level, y, inner, est_rng);
            break;
          }
          case EstimatorKind::exact_oracle:
            noised[k - 1].score(y, score);
            break;
        }
      } catch (const BudgetExceeded&) {
        throw;
      } catch (const std::exception& e) {
        throw std::runtime_error("chain " + std::to_string(chain) + ", step " +
                                 std::to_string(k) + " (t = " + std::to_string(level.t) +
                                 "): " + e.what());
      }
      Rng noise_rng = Rng::stream(seed, chain, static_cast<std::uint64_t>(k), kTagStepNoise);
      noise_rng.normal_fill(xi);
      y = reverse_step(y, score, h, xi);
      check_budget(target.pot, options, start_counts);
    }
    samples.row(chain) = y;
  });

  SampleRun run;
  run.samples = std::move(samples);
  run.seed = seed;
  run.wall_seconds = seconds_since(start_time);
  if (target.pot) {
    const QueryCounts end_counts = target.pot->queries();
    run.potential_queries = end_counts.evaluations - start_counts.evaluations;
    run.gradient_queries = end_counts.gradients - start_counts.gradients;
  }
  return run;
}

}  // namespace

std::int64_t Schedule::total_particles() const {
  std::int64_t total = 0;
  for (std::int64_t n : particles_per_step) total += n;
  return total;
}

void Schedule::validate() const {
  if (steps_N < 1) throw std::invalid_argument("Schedule: N must be >= 1");
  if (!(horizon_T > 0.0)) throw std::invalid_argument("Schedule: T must be > 0");
  if (static_cast<std::int64_t>(grid.size()) != steps_N ||
      static_cast<std::int64_t>(particles_per_step.size()) != steps_N)
    throw std::invalid_argument("Schedule: grid/particle sizes do not match N");
  double prev = 0.0;
  for (double t : grid) {
    if (!(t > prev)) throw std::invalid_argument("Schedule: grid must be strictly increasing");
    prev = t;
  }
  if (std::abs(grid.back() - horizon_T) > 1e-12 * std::max(1.0, horizon_T))
    throw std::invalid_argument("Schedule: grid must end at T");
  for (std::int64_t n : particles_per_step)
    if (n < 1) throw std::invalid_argument("Schedule: all n_k must be >= 1");
}

Schedule schedule_theory(double epsilon, int dim) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("schedule_theory: epsilon must lie in (0, 1)");
  if (dim < 1) throw std::invalid_argument("schedule_theory: dim must be >= 1");

  const double T = std::log(1.0 / epsilon);
  const std::int64_t N = static_cast<std::int64_t>(snapped_ceil(1.0 / epsilon));
  const double exponent = -(2.0 * dim + 3.0);
  const double n_real = dim * std::pow(epsilon, exponent);
  const double n_snapped = snapped_ceil(n_real);
  if (!(n_snapped < 9.0e18)) {
    const double total = dim * std::pow(epsilon, -2.0 * (dim + 2.0));
    throw std::overflow_error(
        "schedule_theory: per-step particle count d*eps^-(2d+3) = " +
        std::to_string(n_real) + " exceeds a 64-bit count (total query budget "
        "d*eps^-2(d+2) = " + std::to_string(total) + ")");
  }
  const std::int64_t n_k = static_cast<std::int64_t>(n_snapped);

  Schedule s;
  s.horizon_T = T;
  s.steps_N = N;
  s.grid.resize(N);
  for (std::int64_t k = 1; k <= N; ++k)
    s.grid[k - 1] = static_cast<double>(k) * T / static_cast<double>(N);
  s.particles_per_step.assign(N, n_k);
  s.validate();
  return s;
}

Schedule schedule_practical(double T, std::int64_t N, std::int64_t n) {
  if (!(T > 0.0)) throw std::invalid_argument("schedule_practical: T must be > 0");
  if (N < 1) throw std::invalid_argument("schedule_practical: N must be >= 1");
  if (n < 1) throw std::invalid_argument("schedule_practical: n must be >= 1");

  Schedule s;
  s.horizon_T = T;
  s.steps_N = N;
  s.grid.resize(N);
  for (std::int64_t k = 1; k <= N; ++k)
    s.grid[k - 1] = static_cast<double>(k) * T / static_cast<double>(N);
  s.grid[N - 1] = T;
  s.particles_per_step.assign(N, n);
  s.validate();
  return s;
}

Eigen::VectorXd reverse_step(const Eigen::VectorXd& y, const Eigen::VectorXd& score,
                             double h, const Eigen::VectorXd& xi) {
  if (!(h > 0.0)) throw std::invalid_argument("reverse_step: h must be > 0");
  if (score.size() != y.size() || xi.size() != y.size())
    throw std::invalid_argument("reverse_step: dimension mismatch");
  const double eh = std::exp(h);
  const double drift = 2.0 * std::expm1(h);
  const double noise = std::sqrt(std::expm1(2.0 * h));
  return eh * y + drift * score + noise * xi;
}

SampleRun run_reverse_diffusion(const GaussianMixture& target, const Schedule& schedule,
                                const EstimatorSpec& estimator, std::int64_t num_chains,
                                std::uint64_t seed, const RunOptions& options) {
  if (estimator.kind == EstimatorKind::exact_oracle) {
    ReverseTarget t;
    t.gm = &target;
    return run_reverse_diffusion_impl(t, schedule, estimator, num_chains, seed, options);
  }
  MixturePotential pot(target);
  ReverseTarget t;
  t.pot = &pot;
  t.gm = &target;
  return run_reverse_diffusion_impl(t, schedule, estimator, num_chains, seed, options);
}

SampleRun run_reverse_diffusion(const Potential& pot, const Schedule& schedule,
                                const EstimatorSpec& estimator, std::int64_t num_chains,
                                std::uint64_t seed, const RunOptions& options) {
  ReverseTarget t;
  t.pot = &pot;
  return run_reverse_diffusion_impl(t, schedule, estimator, num_chains, seed, options);
}

SampleRun run_ula(const Potential& pot, double step_size, std::int64_t steps,
                  std::int64_t num_chains, const GaussianInit& init, std::uint64_t seed,
                  const RunOptions& options) {
  if (!(step_size > 0.0)) throw std::invalid_argument("run_ula: step_size must be > 0");
  if (steps < 0) throw std::invalid_argument("run_ula: steps must be >= 0");
  if (num_chains < 1) throw std::invalid_argument("run_ula: num_chains must be >= 1");
  if (!pot.has_gradient()) throw GradientUnavailable("run_ula: potential has no gradient");
  const int d = pot.dim();
  if (init.center.size() != 0 && init.center.size() != d)
    throw std::invalid_argument("run_ula: init center dimension mismatch");

  const double noise_sd = std::sqrt(2.0 * step_size);
  const QueryCounts start_counts = pot.queries();
  const auto start_time = now();

  Eigen::MatrixXd samples(num_chains, d);
  parallel_for(0, num_chains, [&](std::int64_t chain) {
    Eigen::VectorXd x(d), grad(d), xi(d);
    {
      Rng rng = Rng::stream(seed, chain, 0, kTagInit);
      rng.normal_fill(x);
      x *= init.sigma;
      if (init.center.size() != 0) x += init.center;
    }
    for (std::int64_t s = 1; s <= steps; ++s) {
      pot.gradient(x, grad);
      Rng rng = Rng::stream(seed, chain, static_cast<std::uint64_t>(s), kTagStepNoise);
      rng.normal_fill(xi);
      x -= step_size * grad;
      x += noise_sd * xi;
      if ((s & 1023) == 0) check_budget(&pot, options, start_counts);
    }
    check_budget(&pot, options, start_counts);
    samples.row(chain) = x;
  });

  SampleRun run;
  run.samples = std::move(samples);
  run.seed = seed;
  run.wall_seconds = seconds_since(start_time);
  const QueryCounts end_counts = pot.queries();
  run.potential_queries = end_counts.evaluations - start_counts.evaluations;
  run.gradient_queries = end_counts.gradients - start_counts.gradients;
  return run;
}

SampleRun run_rdmc(const Potential& pot, const Schedule& schedule,
                   const EstimatorSpec& inner, std::int64_t num_chains, std::uint64_t seed,
                   const RunOptions& options) {
  if (inner.kind != EstimatorKind::auxiliary_ula)
    throw ConfigError("run_rdmc: inner estimator must be auxiliary_ula");
  return run_reverse_diffusion(pot, schedule, inner, num_chains, seed, options);
}

}  // namespace snds
