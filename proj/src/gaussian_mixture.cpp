#include "snds/gaussian_mixture.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace snds {

namespace {

constexpr int kMaxStackComponents = 64;
constexpr double kWeightSumTol = 1e-12;

// Quadratic form dx^T M dx for symmetric M, without Eigen temporaries.
double quad_form(const Eigen::MatrixXd& m, const double* dx, int d) {
  const double* data = m.data();
  double q = 0.0;
  for (int c = 0; c < d; ++c) {
    const double* col = data + static_cast<std::ptrdiff_t>(c) * d;
    double acc = 0.0;
    for (int r = 0; r < d; ++r) acc += col[r] * dx[r];
    q += acc * dx[c];
  }
  return q;
}

}  // namespace

GaussianMixture::GaussianMixture(std::vector<double> weights,
                                 std::vector<Eigen::VectorXd> means,
                                 std::vector<Eigen::MatrixXd> covariances)
    : weights_(std::move(weights)) {
  const std::size_t p = weights_.size();
  if (p == 0) throw std::invalid_argument("GaussianMixture: no components");
  if (means.size() != p || covariances.size() != p)
    throw std::invalid_argument(
        "GaussianMixture: weights/means/covariances size mismatch");

  dim_ = static_cast<int>(means[0].size());
  if (dim_ <= 0) throw std::invalid_argument("GaussianMixture: empty mean vector");

  double weight_sum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0)) throw std::invalid_argument("GaussianMixture: weights must be > 0");
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > kWeightSumTol)
    throw std::invalid_argument("GaussianMixture: weights sum to " +
                                std::to_string(weight_sum) + ", expected 1");

  lambda_min_ = std::numeric_limits<double>::infinity();
  lambda_max_ = 0.0;
  r_max_ = 0.0;

  components_.reserve(p);
  for (std::size_t i = 0; i < p; ++i) {
    if (means[i].size() != dim_)
      throw std::invalid_argument("GaussianMixture: mean " + std::to_string(i) +
                                  " has wrong dimension");
    const Eigen::MatrixXd& cov = covariances[i];
    if (cov.rows() != dim_ || cov.cols() != dim_)
      throw std::invalid_argument("GaussianMixture: covariance " + std::to_string(i) +
                                  " has wrong shape");

    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw std::invalid_argument("GaussianMixture: covariance " + std::to_string(i) +
                                  " is not symmetric");

    Component comp;
    comp.log_weight = std::log(weights_[i]);
    comp.mean = std::move(means[i]);
    comp.cov = 0.5 * (cov + cov.transpose());

    Eigen::LLT<Eigen::MatrixXd> llt(comp.cov);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("GaussianMixture: covariance " + std::to_string(i) +
                                  " is not positive definite");
    comp.chol = llt.matrixL();
    comp.precision = llt.solve(Eigen::MatrixXd::Identity(dim_, dim_));

    double log_det = 0.0;
    for (int k = 0; k < dim_; ++k) log_det += 2.0 * std::log(comp.chol(k, k));
    comp.log_norm = -0.5 * (dim_ * std::log(2.0 * std::numbers::pi) + log_det);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(comp.cov);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0))
      throw std::invalid_argument("GaussianMixture: covariance " + std::to_string(i) +
                                  " has non-positive eigenvalue");
    lambda_min_ = std::min(lambda_min_, lo);
    lambda_max_ = std::max(lambda_max_, hi);
    r_max_ = std::max(r_max_, comp.mean.norm());

    components_.push_back(std::move(comp));
  }
}

void GaussianMixture::check_dim(const Eigen::VectorXd& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("GaussianMixture: point has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim_));
}

double GaussianMixture::component_log_terms(const Eigen::VectorXd& x,
                                            double* terms) const {
  const int d = dim_;
  const int p = components();
  double dx_stack[kMaxStackComponents];
  std::vector<double> dx_heap;
  double* dx = dx_stack;
  if (d > kMaxStackComponents) {
    dx_heap.resize(d);
    dx = dx_heap.data();
  }

  double max_term = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < p; ++i) {
    const Component& c = components_[i];
    for (int k = 0; k < d; ++k) dx[k] = x[k] - c.mean[k];
    terms[i] = c.log_weight + c.log_norm - 0.5 * quad_form(c.precision, dx, d);
    if (terms[i] > max_term) max_term = terms[i];
  }
  return max_term;
}

double GaussianMixture::log_density(const Eigen::VectorXd& x) const {
  check_dim(x);
  const int p = components();
  double stack_terms[kMaxStackComponents];
  std::vector<double> heap_terms;
  double* terms = stack_terms;
  if (p > kMaxStackComponents) {
    heap_terms.resize(p);
    terms = heap_terms.data();
  }

  const double max_term = component_log_terms(x, terms);
  double acc = 0.0;
  for (int i = 0; i < p; ++i) acc += std::exp(terms[i] - max_term);
  return max_term + std::log(acc);
}

void GaussianMixture::score(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  check_dim(x);
  const int d = dim_;
  const int p = components();

  double stack_terms[kMaxStackComponents];
  std::vector<double> heap_terms;
  double* terms = stack_terms;
  if (p > kMaxStackComponents) {
    heap_terms.resize(p);
    terms = heap_terms.data();
  }
  const double max_term = component_log_terms(x, terms);

  double denom = 0.0;
  for (int i = 0; i < p; ++i) {
    terms[i] = std::exp(terms[i] - max_term);
    denom += terms[i];
  }

  out.resize(d);
  out.setZero();
  double dx_stack[kMaxStackComponents];
  std::vector<double> dx_heap;
  double* dx = dx_stack;
  if (d > kMaxStackComponents) {
    dx_heap.resize(d);
    dx = dx_heap.data();
  }

  for (int i = 0; i < p; ++i) {
    const Component& c = components_[i];
    const double gamma = terms[i] / denom;
    if (gamma == 0.0) continue;
    for (int k = 0; k < d; ++k) dx[k] = x[k] - c.mean[k];
    const double* prec = c.precision.data();
    for (int col = 0; col < d; ++col) {
      const double* pcol = prec + static_cast<std::ptrdiff_t>(col) * d;
      double acc = 0.0;
      for (int row = 0; row < d; ++row) acc += pcol[row] * dx[row];
      out[col] -= gamma * acc;  // score contribution -gamma_i Sigma_i^-1 (x - mu_i)
    }
  }
}

Eigen::VectorXd GaussianMixture::score(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(dim_);
  score(x, out);
  return out;
}

GaussianMixture GaussianMixture::noised(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("GaussianMixture::noised: t must be >= 0");
  const double shrink = std::exp(-t);
  const double lambda = std::exp(-2.0 * t);
  const double one_minus_lambda = -std::expm1(-2.0 * t);

  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
  means.reserve(components_.size());
  covs.reserve(components_.size());
  for (const Component& c : components_) {
    means.push_back(shrink * c.mean);
    covs.push_back(lambda * c.cov +
                   one_minus_lambda * Eigen::MatrixXd::Identity(dim_, dim_));
  }
  return GaussianMixture(weights_, std::move(means), std::move(covs));
}

MixtureConstants GaussianMixture::constants() const {
  MixtureConstants k;
  k.lambda_min = lambda_min_;
  k.lambda_max = lambda_max_;
  k.r_max = r_max_;
  k.beta = 1.0 / lambda_min_;
  k.a = 1.0 / (2.0 * lambda_max_);
  k.b = lambda_max_ * (r_max_ / lambda_min_) * (r_max_ / lambda_min_);
  return k;
}

Eigen::MatrixXd GaussianMixture::sample(std::int64_t n, std::uint64_t seed) const {
  Rng rng(seed);
  return sample(n, rng);
}

Eigen::MatrixXd GaussianMixture::sample(std::int64_t n, Rng& rng) const {
  if (n < 1) throw std::invalid_argument("GaussianMixture::sample: n must be >= 1");
  const int p = components();
  Eigen::MatrixXd out(n, dim_);
  Eigen::VectorXd z(dim_);
  for (std::int64_t r = 0; r < n; ++r) {
    const double u = rng.uniform();
    int comp = p - 1;
    double cum = 0.0;
    for (int i = 0; i < p; ++i) {
      cum += weights_[i];
      if (u < cum) {
        comp = i;
        break;
      }
    }
    rng.normal_fill(z);
    out.row(r) = components_[comp].mean + components_[comp].chol * z;
  }
  return out;
}

MixturePotential::MixturePotential(GaussianMixture mixture)
    : Potential(mixture.dim()), mixture_(std::move(mixture)) {}

double MixturePotential::value_impl(const Eigen::VectorXd& x) const {
  return -mixture_.log_density(x);
}

void MixturePotential::gradient_impl(const Eigen::VectorXd& x,
                                     Eigen::VectorXd& out) const {
  mixture_.score(x, out);
  out = -out;
}

}  // namespace snds
