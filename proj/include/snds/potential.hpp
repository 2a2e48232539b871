#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Core>

#include "snds/errors.hpp"

namespace snds {

struct QueryCounts {
  std::uint64_t evaluations = 0;
  std::uint64_t gradients = 0;

  std::uint64_t total() const { return evaluations + gradients; }
};

// Query interface for a potential V with target density mu ~ e^{-V}.
// value() and gradient() are pure in their input; the only mutable state is
// the query tally, which is kept with atomic counters so a potential can be
// shared across worker threads.
class Potential {
 public:
  explicit Potential(int dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("Potential: dim must be positive");
  }
  virtual ~Potential() = default;

  Potential(const Potential& other) : dim_(other.dim_) {}
  Potential& operator=(const Potential&) = delete;

  int dim() const { return dim_; }
  virtual bool has_gradient() const { return false; }

  double value(const Eigen::VectorXd& x) const {
    check_dim(x);
    eval_count_.fetch_add(1, std::memory_order_relaxed);
    return value_impl(x);
  }

  void gradient(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
    check_dim(x);
    grad_count_.fetch_add(1, std::memory_order_relaxed);
    gradient_impl(x, out);
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(dim_);
    gradient(x, out);
    return out;
  }

  QueryCounts queries() const {
    return {eval_count_.load(std::memory_order_relaxed),
            grad_count_.load(std::memory_order_relaxed)};
  }

  void reset_queries() const {
    eval_count_.store(0, std::memory_order_relaxed);
    grad_count_.store(0, std::memory_order_relaxed);
  }

 protected:
  virtual double value_impl(const Eigen::VectorXd& x) const = 0;
  virtual void gradient_impl(const Eigen::VectorXd&, Eigen::VectorXd&) const {
    throw GradientUnavailable("Potential: gradient oracle not available");
  }

  void check_dim(const Eigen::VectorXd& x) const {
    if (x.size() != dim_)
      throw std::invalid_argument("Potential: point has dimension " +
                                  std::to_string(x.size()) + ", expected " +
                                  std::to_string(dim_));
  }

 private:
  int dim_;
  mutable std::atomic<std::uint64_t> eval_count_{0};
  mutable std::atomic<std::uint64_t> grad_count_{0};
};

// Potential built from plain callables; handy for tests and user targets.
class FunctionPotential : public Potential {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using GradientFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

  FunctionPotential(int dim, ValueFn value, GradientFn gradient = nullptr)
      : Potential(dim), value_(std::move(value)), gradient_(std::move(gradient)) {}

  bool has_gradient() const override { return static_cast<bool>(gradient_); }

 protected:
  double value_impl(const Eigen::VectorXd& x) const override { return value_(x); }

  void gradient_impl(const Eigen::VectorXd& x, Eigen::VectorXd& out) const override {
    if (!gradient_) throw GradientUnavailable("FunctionPotential: no gradient callable");
    out.resize(x.size());
    gradient_(x, out);
  }

 private:
  ValueFn value_;
  GradientFn gradient_;
};

}  // namespace snds
