#include "snds/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "snds/errors.hpp"
#include "snds/parallel.hpp"

namespace snds {

namespace {

constexpr std::int64_t kExactSizeLimit = 2000;

Eigen::MatrixXd squared_cost_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.rows();
  Eigen::MatrixXd cost(n, m);
  parallel_for(0, n, [&](std::int64_t i) {
    for (Eigen::Index j = 0; j < m; ++j)
      cost(i, j) = (A.row(i) - B.row(j)).squaredNorm();
  });
  return cost;
}

double median_of(std::vector<double> values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  return values[mid];
}

double logsumexp_row(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

W2Result sinkhorn_w2(const Eigen::MatrixXd& cost, const SinkhornOptions& opt) {
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  const double log_a = -std::log(static_cast<double>(n));
  const double log_b = -std::log(static_cast<double>(m));

  double eps = opt.epsilon;
  if (!(eps > 0.0)) {
    std::vector<double> flat(cost.data(), cost.data() + cost.size());
    eps = 0.01 * median_of(std::move(flat));
    if (!(eps > 0.0)) eps = 1e-6;  // degenerate cloud, all costs zero
  }

  // Log-domain scalings: P_ij = exp(u_i + v_j - C_ij / eps) with row/column
  // log-marginal constraints log_a, log_b.
  Eigen::MatrixXd K = -cost / eps;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd tmp_n(n), tmp_m(m);

  double violation = std::numeric_limits<double>::infinity();
  std::int64_t it = 0;
  for (; it < opt.max_iterations && violation > opt.marginal_tol; ++it) {
    for (Eigen::Index i = 0; i < n; ++i) {
      tmp_m = K.row(i).transpose() + v;
      u[i] = log_a - logsumexp_row(tmp_m);
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      tmp_n = K.col(j) + u;
      v[j] = log_b - logsumexp_row(tmp_n);
    }
    // Columns are exact after the v-update; measure the row marginals.
    violation = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      tmp_m = K.row(i).transpose() + v;
      const double row_mass = std::exp(u[i] + logsumexp_row(tmp_m));
      violation = std::max(violation, std::abs(row_mass - std::exp(log_a)));
    }
  }

  double plan_cost = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      plan_cost += std::exp(u[i] + v[j] + K(i, j)) * cost(i, j);

  const double dual_value = eps * (u.sum() * std::exp(log_a) * 1.0 +
                                   v.sum() * std::exp(log_b) * 1.0);

  W2Result result;
  result.method = W2Method::sinkhorn;
  result.distance = std::sqrt(std::max(0.0, plan_cost));
  result.iterations = it;
  result.dual_gap = plan_cost - dual_value;
  return result;
}

}  // namespace

double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>& row_to_col) {
  if (cost.rows() != cost.cols())
    throw std::invalid_argument("solve_assignment: cost matrix must be square");
  const int n = static_cast<int>(cost.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Hungarian algorithm with row/column potentials, one augmenting path per
  // row. p[j] is the row matched to column j (columns are 1-based, 0 = root).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  row_to_col.assign(n, -1);
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    if (p[j] == 0) continue;
    row_to_col[p[j] - 1] = j - 1;
    total += cost(p[j] - 1, j - 1);
  }
  return total;
}

W2Result wasserstein2(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, W2Method method,
                      const SinkhornOptions& sinkhorn) {
  if (A.rows() < 1 || B.rows() < 1)
    throw std::invalid_argument("wasserstein2: empty sample set");
  if (A.cols() != B.cols())
    throw std::invalid_argument("wasserstein2: dimension mismatch");
  if (!A.allFinite() || !B.allFinite())
    throw std::invalid_argument("wasserstein2: non-finite input");

  if (method == W2Method::auto_select)
    method = (A.rows() == B.rows() && A.rows() <= kExactSizeLimit)
                 ? W2Method::exact_assignment
                 : W2Method::sinkhorn;

  if (method == W2Method::exact_assignment) {
    if (A.rows() != B.rows())
      throw std::invalid_argument("wasserstein2: exact assignment requires equal sizes");
    const Eigen::MatrixXd cost = squared_cost_matrix(A, B);
    std::vector<int> assignment;
    const double total = solve_assignment(cost, assignment);
    W2Result result;
    result.method = W2Method::exact_assignment;
    result.distance = std::sqrt(std::max(0.0, total / static_cast<double>(A.rows())));
    return result;
  }

  return sinkhorn_w2(squared_cost_matrix(A, B), sinkhorn);
}

ScoreMseResult score_mse(const EstimatorSpec& spec, const GaussianMixture& gm, double t,
                         const Eigen::MatrixXd& eval_points, std::int64_t replications,
                         std::uint64_t seed) {
  spec.validate();
  if (replications < 1) throw std::invalid_argument("score_mse: replications >= 1");
  if (eval_points.rows() < 1) throw std::invalid_argument("score_mse: no eval points");
  if (eval_points.cols() != gm.dim())
    throw std::invalid_argument("score_mse: eval point dimension mismatch");

  const NoiseLevel level(t);
  const GaussianMixture noised = gm.noised(t);
  const Eigen::Index npts = eval_points.rows();

  Eigen::MatrixXd oracle(npts, gm.dim());
  for (Eigen::Index j = 0; j < npts; ++j) oracle.row(j) = noised.score(eval_points.row(j));

  if (spec.kind == EstimatorKind::exact_oracle) return {0.0, 0.0};

  MixturePotential pot(gm);
  std::vector<double> rep_means(replications, 0.0);
  parallel_for(0, replications, [&](std::int64_t rep) {
    Eigen::VectorXd z(gm.dim()), est(gm.dim());
    double acc = 0.0;
    for (Eigen::Index j = 0; j < npts; ++j) {
      z = eval_points.row(j);
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(j),
                            /*tag=*/7);
      switch (spec.kind) {
        case EstimatorKind::self_normalized_dsi:
          est = self_normalized_score(pot, level, z, spec.particles, rng, spec.t_floor);
          break;
        case EstimatorKind::tsi_gaussian:
          est = tsi_gaussian_score(pot, level, z, spec.particles, rng, spec.t_floor);
          break;
        case EstimatorKind::auxiliary_ula:
          est = auxiliary_ula_score(pot, level, z, spec, rng);
          break;
        case EstimatorKind::exact_oracle:
          est = oracle.row(j);
          break;
      }
      acc += (est - oracle.row(j).transpose()).squaredNorm();
    }
    rep_means[rep] = acc / static_cast<double>(npts);
  });

  double mean = 0.0;
  for (double v : rep_means) mean += v;
  mean /= static_cast<double>(replications);
  double var = 0.0;
  for (double v : rep_means) var += (v - mean) * (v - mean);
  var = replications > 1 ? var / static_cast<double>(replications - 1) : 0.0;

  ScoreMseResult result;
  result.mse = mean;
  result.stderr_mse = std::sqrt(var / static_cast<double>(replications));
  return result;
}

int ModeCoverage::covered(double min_fraction) const {
  int count = 0;
  for (double f : fraction)
    if (f >= min_fraction) ++count;
  return count;
}

ModeCoverage mode_coverage(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& centers,
                           double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("mode_coverage: radius must be > 0");
  if (samples.cols() != centers.cols())
    throw std::invalid_argument("mode_coverage: dimension mismatch");
  if (centers.rows() < 1) throw std::invalid_argument("mode_coverage: no centers");

  const Eigen::Index n = samples.rows();
  const Eigen::Index p = centers.rows();
  std::vector<std::int64_t> counts(p, 0);
  std::int64_t stray = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index best_j = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double d2 = (samples.row(i) - centers.row(j)).squaredNorm();
      if (d2 < best) {
        best = d2;
        best_j = j;
      }
    }
    if (best <= radius * radius)
      ++counts[best_j];
    else
      ++stray;
  }

  ModeCoverage cov;
  cov.samples = n;
  cov.stray = static_cast<double>(stray) / static_cast<double>(n);
  cov.fraction.resize(p);
  for (Eigen::Index j = 0; j < p; ++j)
    cov.fraction[j] = static_cast<double>(counts[j]) / static_cast<double>(n);
  return cov;
}

double moment2(const Eigen::MatrixXd& samples) {
  if (samples.rows() < 1) throw std::invalid_argument("moment2: empty sample set");
  return samples.rowwise().squaredNorm().mean();
}

}  // namespace snds
