#include "snds/theory_checks.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "snds/benchmarks.hpp"
#include "snds/rng.hpp"

namespace snds {

namespace {

constexpr std::uint64_t kCheckTag = 11;

// Symmetric second differences of V = -log mu, step 1e-4 max(1, ||x||).
Eigen::MatrixXd fd_hessian(const GaussianMixture& gm, const Eigen::VectorXd& x) {
  const int d = gm.dim();
  const double h = 1e-4 * std::max(1.0, x.norm());
  auto V = [&](const Eigen::VectorXd& p) { return -gm.log_density(p); };

  Eigen::MatrixXd hess(d, d);
  Eigen::VectorXd a = x, b = x;
  const double v0 = V(x);
  for (int i = 0; i < d; ++i) {
    a = x;
    a[i] += h;
    b = x;
    b[i] -= h;
    hess(i, i) = (V(a) - 2.0 * v0 + V(b)) / (h * h);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Eigen::VectorXd pp = x, pm = x, mp = x, mm = x;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      const double val = (V(pp) - V(pm) - V(mp) + V(mm)) / (4.0 * h * h);
      hess(i, j) = val;
      hess(j, i) = val;
    }
  }
  return 0.5 * (hess + hess.transpose());
}

Eigen::VectorXd envelope_point(const GaussianMixture& gm, Rng& rng) {
  const MixtureConstants k = gm.constants();
  const double sd = k.r_max + 3.0 * std::sqrt(k.lambda_max);
  return sd * rng.normal_vector(gm.dim());
}

}  // namespace

CheckReport check_semi_log_convexity(const GaussianMixture& gm, std::int64_t num_points,
                                     std::uint64_t seed, double tol) {
  if (num_points < 1)
    throw std::invalid_argument("check_semi_log_convexity: num_points >= 1");

  const double beta = gm.constants().beta;
  Rng rng = Rng::stream(seed, 0, 0, kCheckTag);

  CheckReport report;
  report.name = "semi_log_convexity";
  report.tolerance = tol;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < num_points; ++i) {
    const Eigen::VectorXd x = envelope_point(gm, rng);
    const Eigen::MatrixXd hess = fd_hessian(gm, x);
    if (!hess.allFinite())
      throw std::runtime_error("check_semi_log_convexity: non-finite finite difference");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
    const double top = eig.eigenvalues().maxCoeff();
    report.details.push_back({x, top, beta});
    report.worst_violation = std::max(report.worst_violation, top - beta);
  }
  report.points_tested = num_points;
  report.passed = report.worst_violation <= tol;
  return report;
}

CheckReport check_dissipativity(const GaussianMixture& gm, std::int64_t num_points,
                                std::uint64_t seed, double tol) {
  if (num_points < 1) throw std::invalid_argument("check_dissipativity: num_points >= 1");

  const MixtureConstants k = gm.constants();
  const double far_radius = 10.0 * (k.r_max + std::sqrt(k.lambda_max));
  Rng rng = Rng::stream(seed, 0, 1, kCheckTag);

  CheckReport report;
  report.name = "dissipativity";
  report.tolerance = tol;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad(gm.dim());
  for (std::int64_t i = 0; i < num_points; ++i) {
    Eigen::VectorXd x;
    if (i % 2 == 0) {
      x = envelope_point(gm, rng);
    } else {
      // random direction, radius up to the far ring
      x = rng.normal_vector(gm.dim());
      const double norm = x.norm();
      if (norm > 0.0) x *= (rng.uniform() * far_radius) / norm;
    }
    gm.score(x, grad);
    grad = -grad;  // grad V
    const double lhs = grad.dot(x);
    const double rhs = k.a * x.squaredNorm() - k.b;
    report.details.push_back({x, lhs, rhs});
    report.worst_violation = std::max(report.worst_violation, rhs - lhs);
  }
  report.points_tested = num_points;
  report.passed = report.worst_violation <= tol;
  return report;
}

CheckReport check_second_moment(const GaussianMixture& gm, std::int64_t n_samples,
                                std::uint64_t seed) {
  if (n_samples < 10000)
    throw std::invalid_argument("check_second_moment: need at least 1e4 samples");

  const MixtureConstants k = gm.constants();
  const double bound = (k.b + 2.0 * gm.dim()) / k.a;

  const Eigen::MatrixXd samples = gm.sample(n_samples, seed);
  const Eigen::VectorXd sq = samples.rowwise().squaredNorm();
  const double m2 = sq.mean();
  const double var = (sq.array() - m2).square().sum() / static_cast<double>(n_samples - 1);
  const double se = std::sqrt(var / static_cast<double>(n_samples));

  CheckReport report;
  report.name = "second_moment";
  report.tolerance = 0.0;
  report.points_tested = n_samples;
  report.details.push_back({Eigen::VectorXd(), m2, bound + 3.0 * se});
  report.worst_violation = m2 - bound - 3.0 * se;
  report.passed = report.worst_violation <= report.tolerance;
  return report;
}

std::vector<NonHolderRow> non_holder_demo(const std::vector<double>& x_values, double eta) {
  const GaussianMixture gm = make_non_holder_mixture();
  std::vector<NonHolderRow> rows;
  rows.reserve(x_values.size());
  Eigen::VectorXd p(2), s(2);
  for (double x : x_values) {
    NonHolderRow row;
    row.x = x;
    p << x, x;
    gm.score(p, s);
    row.neg_score_diagonal = -s;
    p << x, x + eta;
    gm.score(p, s);
    row.neg_score_offset = -s;
    row.first_coordinate_ratio = x != 0.0 ? row.neg_score_offset[0] / x
                                          : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  return rows;
}

PoincareResult poincare_ratio(double c_norm, double lambda_max, double lambda_min, int dim,
                              std::int64_t n_samples, std::uint64_t seed) {
  if (!(c_norm > 0.0)) throw std::invalid_argument("poincare_ratio: ||c|| must be > 0");
  if (!(lambda_max >= lambda_min && lambda_min > 0.0))
    throw std::invalid_argument("poincare_ratio: need lambda_max >= lambda_min > 0");
  if (dim < 1 || n_samples < 2) throw std::invalid_argument("poincare_ratio: bad sizes");

  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
  c[0] = c_norm;
  std::vector<Eigen::VectorXd> means = {c, -c};
  std::vector<Eigen::MatrixXd> covs = {
      lambda_max * Eigen::MatrixXd::Identity(dim, dim),
      lambda_min * Eigen::MatrixXd::Identity(dim, dim)};
  const GaussianMixture gm({0.5, 0.5}, std::move(means), std::move(covs));

  const Eigen::MatrixXd samples = gm.sample(n_samples, seed);
  const double slope = 2.0 / c_norm;

  double sum_f = 0.0, sum_f2 = 0.0, sum_grad2 = 0.0;
  for (Eigen::Index i = 0; i < n_samples; ++i) {
    const double t = samples(i, 0);
    const double f = std::clamp(slope * t, -1.0, 1.0);
    sum_f += f;
    sum_f2 += f * f;
    // gradient of f vanishes outside the slab |x.e1| <= ||c||/2
    if (std::abs(t) <= c_norm / 2.0) sum_grad2 += slope * slope;
  }
  const double n = static_cast<double>(n_samples);
  const double mean_f = sum_f / n;

  PoincareResult result;
  result.samples = n_samples;
  result.variance = sum_f2 / n - mean_f * mean_f;
  result.dirichlet = sum_grad2 / n;
  result.ratio = result.dirichlet > 0.0 ? result.variance / result.dirichlet
                                        : std::numeric_limits<double>::infinity();
  result.bound = c_norm * c_norm * std::exp(c_norm * c_norm / (2.0 * lambda_max)) / 2.0;
  return result;
}

}  // namespace snds
