#include "snds/score_estimation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "snds/errors.hpp"

namespace snds {

namespace {

void check_level(const NoiseLevel& level, double t_floor) {
  if (!(t_floor > 0.0)) throw ConfigError("score estimator: t_floor must be > 0");
  if (level.t < t_floor)
    throw ConfigError("score estimator: t = " + std::to_string(level.t) +
                      " is below t_floor = " + std::to_string(t_floor) +
                      " (the 1/(1-e^-2t) factor is singular at t = 0)");
}

// Running self-normalized weighted mean. Terms are accumulated relative to
// the smallest potential value seen so far; the accumulators are rescaled
// whenever a new minimum appears, so every stored weight lies in (0, 1].
class SoftmaxMean {
 public:
  explicit SoftmaxMean(Eigen::Index dim)
      : num_(Eigen::VectorXd::Zero(dim)),
        den_(0.0),
        ref_(std::numeric_limits<double>::infinity()) {}

  void add(double potential_value, const Eigen::VectorXd& payload) {
    if (potential_value < ref_) {
      const double rescale = ref_ == std::numeric_limits<double>::infinity()
                                 ? 0.0
                                 : std::exp(potential_value - ref_);
      num_ *= rescale;
      den_ *= rescale;
      ref_ = potential_value;
    }
    const double w = std::exp(ref_ - potential_value);
    num_ += w * payload;
    den_ += w;
  }

  Eigen::VectorXd mean() const { return num_ / den_; }
  double min_potential() const { return ref_; }

 private:
  Eigen::VectorXd num_;
  double den_;
  double ref_;
};

}  // namespace

NoiseLevel::NoiseLevel(double t_in) : t(t_in) {
  if (!(t > 0.0)) throw std::invalid_argument("NoiseLevel: t must be > 0");
  lambda = std::exp(-2.0 * t);
  one_minus_lambda = -std::expm1(-2.0 * t);
}

EstimatorKind estimator_kind_from_string(const std::string& name) {
  if (name == "self_normalized_dsi") return EstimatorKind::self_normalized_dsi;
  if (name == "tsi_gaussian") return EstimatorKind::tsi_gaussian;
  if (name == "auxiliary_ula") return EstimatorKind::auxiliary_ula;
  if (name == "exact_oracle") return EstimatorKind::exact_oracle;
  throw ConfigError("unknown estimator kind: " + name);
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::self_normalized_dsi: return "self_normalized_dsi";
    case EstimatorKind::tsi_gaussian: return "tsi_gaussian";
    case EstimatorKind::auxiliary_ula: return "auxiliary_ula";
    case EstimatorKind::exact_oracle: return "exact_oracle";
  }
  throw std::logic_error("unreachable estimator kind");
}

void EstimatorSpec::validate() const {
  if (particles < 1) throw ConfigError("estimator: particles must be >= 1");
  if (!(t_floor > 0.0)) throw ConfigError("estimator: t_floor must be > 0");
  if (kind == EstimatorKind::auxiliary_ula) {
    if (inner_steps < 0) throw ConfigError("estimator: inner_steps must be >= 0");
    if (inner_steps > 0 && !(inner_step_size > 0.0))
      throw ConfigError("estimator: inner_step_size must be > 0");
  } else {
    if (inner_steps != 0 || inner_step_size != 0.0)
      throw ConfigError("estimator: inner parameters only apply to auxiliary_ula");
  }
}

Eigen::VectorXd self_normalized_score(const Potential& pot, const NoiseLevel& level,
                                      const Eigen::VectorXd& z, std::int64_t n,
                                      Rng& rng, double t_floor, EstimatorStats* stats) {
  check_level(level, t_floor);
  if (n < 1) throw ConfigError("self_normalized_score: n must be >= 1");

  const Eigen::Index d = z.size();
  const double sd = std::sqrt(level.one_minus_lambda);
  const double et = std::exp(level.t);

  SoftmaxMean acc(d);
  Eigen::VectorXd y(d), arg(d);
  double max_norm = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    rng.normal_fill(y);
    y *= sd;
    arg = et * (z - y);
    acc.add(pot.value(arg), y);
    max_norm = std::max(max_norm, y.norm());
  }

  Eigen::VectorXd out = -acc.mean() / level.one_minus_lambda;
  // A convex combination of -y_i/(1-lambda) cannot leave the sample hull.
  if (out.norm() > max_norm / level.one_minus_lambda * (1.0 + 1e-9) + 1e-300)
    throw std::logic_error("self_normalized_score: boundedness violated");
  if (stats) {
    stats->max_sample_norm = max_norm;
    stats->min_potential = acc.min_potential();
    stats->samples = n;
  }
  return out;
}

Eigen::VectorXd self_normalized_score(const Potential& pot, const NoiseLevel& level,
                                      const Eigen::VectorXd& z,
                                      const Eigen::MatrixXd& samples, double t_floor,
                                      EstimatorStats* stats) {
  check_level(level, t_floor);
  if (samples.rows() < 1) throw ConfigError("self_normalized_score: need >= 1 sample");
  if (samples.cols() != z.size())
    throw std::invalid_argument("self_normalized_score: sample dimension mismatch");

  const Eigen::Index d = z.size();
  const double et = std::exp(level.t);

  SoftmaxMean acc(d);
  Eigen::VectorXd y(d), arg(d);
  double max_norm = 0.0;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    y = samples.row(i);
    arg = et * (z - y);
    acc.add(pot.value(arg), y);
    max_norm = std::max(max_norm, y.norm());
  }

  Eigen::VectorXd out = -acc.mean() / level.one_minus_lambda;
  if (out.norm() > max_norm / level.one_minus_lambda * (1.0 + 1e-9) + 1e-300)
    throw std::logic_error("self_normalized_score: boundedness violated");
  if (stats) {
    stats->max_sample_norm = max_norm;
    stats->min_potential = acc.min_potential();
    stats->samples = samples.rows();
  }
  return out;
}

namespace {

class TsiAccumulator {
 public:
  TsiAccumulator(const Potential& pot, const NoiseLevel& level, const Eigen::VectorXd& z)
      : pot_(pot),
        z_(z),
        sqrt_lambda_(std::sqrt(level.lambda)),
        proposal_sd_(std::sqrt(level.one_minus_lambda)),
        acc_(z.size()),
        arg_(z.size()),
        grad_(z.size()),
        payload_(z.size()) {}

  void add(const Eigen::VectorXd& y) {
    arg_ = (z_ - proposal_sd_ * y) / sqrt_lambda_;
    const double v = pot_.value(arg_);
    pot_.gradient(arg_, grad_);
    payload_ = -grad_ / sqrt_lambda_;
    acc_.add(v, payload_);
  }

  Eigen::VectorXd mean() const { return acc_.mean(); }

 private:
  const Potential& pot_;
  const Eigen::VectorXd& z_;
  double sqrt_lambda_;
  double proposal_sd_;
  SoftmaxMean acc_;
  Eigen::VectorXd arg_, grad_, payload_;
};

}  // namespace

Eigen::VectorXd tsi_gaussian_score(const Potential& pot, const NoiseLevel& level,
                                   const Eigen::VectorXd& z, std::int64_t n, Rng& rng,
                                   double t_floor) {
  check_level(level, t_floor);
  if (n < 1) throw ConfigError("tsi_gaussian_score: n must be >= 1");
  if (!pot.has_gradient())
    throw GradientUnavailable("tsi_gaussian_score: potential has no gradient oracle");

  TsiAccumulator acc(pot, level, z);
  Eigen::VectorXd y(z.size());
  for (std::int64_t i = 0; i < n; ++i) {
    rng.normal_fill(y);
    acc.add(y);
  }
  return acc.mean();
}

Eigen::VectorXd tsi_gaussian_score(const Potential& pot, const NoiseLevel& level,
                                   const Eigen::VectorXd& z,
                                   const Eigen::MatrixXd& samples, double t_floor) {
  check_level(level, t_floor);
  if (samples.rows() < 1) throw ConfigError("tsi_gaussian_score: need >= 1 sample");
  if (samples.cols() != z.size())
    throw std::invalid_argument("tsi_gaussian_score: sample dimension mismatch");
  if (!pot.has_gradient())
    throw GradientUnavailable("tsi_gaussian_score: potential has no gradient oracle");

  TsiAccumulator acc(pot, level, z);
  Eigen::VectorXd y(z.size());
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    y = samples.row(i);
    acc.add(y);
  }
  return acc.mean();
}

Eigen::VectorXd auxiliary_ula_score(const Potential& pot, const NoiseLevel& level,
                                    const Eigen::VectorXd& z, const EstimatorSpec& spec,
                                    Rng& rng) {
  if (spec.kind != EstimatorKind::auxiliary_ula)
    throw ConfigError("auxiliary_ula_score: spec.kind must be auxiliary_ula");
  spec.validate();
  check_level(level, spec.t_floor);
  if (!pot.has_gradient())
    throw GradientUnavailable("auxiliary_ula_score: potential has no gradient oracle");

  const Eigen::Index d = z.size();
  const double et = std::exp(level.t);
  const double emt = std::exp(-level.t);
  const double oml = level.one_minus_lambda;
  const double h = spec.inner_step_size;
  const double noise_sd = std::sqrt(2.0 * h);

  Eigen::VectorXd u(d), grad(d), xi(d);
  Eigen::VectorXd mean_u = Eigen::VectorXd::Zero(d);
  for (std::int64_t pcl = 0; pcl < spec.particles; ++pcl) {
    rng.normal_fill(u);
    if (spec.inner_init == AuxInit::prior) {
      // N(z, (1-lambda) I) in the noised variable, mapped to the clean scale.
      u = et * (z + std::sqrt(oml) * u);
    }
    for (std::int64_t s = 0; s < spec.inner_steps; ++s) {
      pot.gradient(u, grad);
      grad += (emt * (emt * u - z)) / oml;
      rng.normal_fill(xi);
      u -= h * grad;
      u += noise_sd * xi;
    }
    mean_u += u;
  }
  mean_u /= static_cast<double>(spec.particles);
  return (emt * mean_u - z) / oml;
}

Eigen::VectorXd exact_oracle_score(const GaussianMixture& gm, const NoiseLevel& level,
                                   const Eigen::VectorXd& z) {
  return gm.noised(level.t).score(z);
}

}  // namespace snds
