#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "snds/potential.hpp"
#include "snds/rng.hpp"

namespace snds {

// Structural constants of a Gaussian mixture:
//   beta = 1/lambda_min            (semi-log-convexity: hess V <= beta I)
//   a    = 1/(2 lambda_max)        (dissipativity slope)
//   b    = lambda_max (r_max/lambda_min)^2   (dissipativity offset)
// where lambda_min/lambda_max run over the eigenvalues of all component
// covariances and r_max = max_i ||mu_i||.
struct MixtureConstants {
  double beta;
  double a;
  double b;
  double lambda_min;
  double lambda_max;
  double r_max;
};

class GaussianMixture {
 public:
  GaussianMixture(std::vector<double> weights, std::vector<Eigen::VectorXd> means,
                  std::vector<Eigen::MatrixXd> covariances);

  int dim() const { return dim_; }
  int components() const { return static_cast<int>(components_.size()); }

  double weight(int i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  const Eigen::VectorXd& mean(int i) const { return components_[i].mean; }
  const Eigen::MatrixXd& covariance(int i) const { return components_[i].cov; }

  // Exact normalized log density, combined in log space.
  double log_density(const Eigen::VectorXd& x) const;

  // Score grad log mu(x); the out-parameter form avoids per-call allocation.
  void score(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;
  Eigen::VectorXd score(const Eigen::VectorXd& x) const;

  // Law of the forward OU process at time t >= 0 started from this mixture:
  // each component N(m, S) becomes N(e^-t m, e^-2t S + (1 - e^-2t) I).
  GaussianMixture noised(double t) const;

  MixtureConstants constants() const;

  // n i.i.d. draws, one row per sample. Deterministic given the seed.
  Eigen::MatrixXd sample(std::int64_t n, std::uint64_t seed) const;
  Eigen::MatrixXd sample(std::int64_t n, Rng& rng) const;

 private:
  struct Component {
    double log_weight;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    Eigen::MatrixXd chol;       // lower Cholesky factor of cov
    Eigen::MatrixXd precision;  // cov^-1, from the Cholesky factor
    double log_norm;            // -(d log 2pi + log det cov)/2
  };

  void check_dim(const Eigen::VectorXd& x) const;
  // Per-component log w_i + log phi_i(x); returns the max term.
  double component_log_terms(const Eigen::VectorXd& x, double* terms) const;

  int dim_;
  std::vector<double> weights_;
  std::vector<Component> components_;
  double lambda_min_;
  double lambda_max_;
  double r_max_;
};

// Potential adapter: V = -log mu with exact gradient -score.
class MixturePotential : public Potential {
 public:
  explicit MixturePotential(GaussianMixture mixture);

  bool has_gradient() const override { return true; }
  const GaussianMixture& mixture() const { return mixture_; }

 protected:
  double value_impl(const Eigen::VectorXd& x) const override;
  void gradient_impl(const Eigen::VectorXd& x, Eigen::VectorXd& out) const override;

 private:
  GaussianMixture mixture_;
};

}  // namespace snds
