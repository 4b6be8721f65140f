#pragma once

// Data-parallel inner loops shared by the targets and diagnostics.
//
// Each kernel has two implementations:
//   * serial::   plain loops, the reference the tests compare against;
//   * parallel:: fixed-size row blocks reduced in block order, with the blocks
//                distributed over OpenMP threads.
// The block layout never depends on the thread count, so parallel results are
// bit-identical whether one thread or many run them.

#include <cmath>
#include <cstddef>
#include <span>

#include "vhmc/linalg.hpp"

namespace vhmc::kernels {

inline constexpr Eigen::Index kBlockRows = 256;

/// Number of OpenMP threads the parallel kernels will use.
int max_threads();

namespace serial {

/// Σ_n softplus(a_n) − t_n a_n with a_n = x_nᵀw; the negative Bernoulli log-likelihood.
double logistic_nll(const RowMatrix& design, const Vector& labels, const Vector& w);

/// Σ_n (σ(x_nᵀw) − t_n) x_n.
Vector logistic_nll_gradient(const RowMatrix& design, const Vector& labels, const Vector& w);

/// Σ_i Σ_j (1 + ⟨x_i, y_j⟩)² over rows of x and y.
double quadratic_kernel_sum(const RowMatrix& x, const RowMatrix& y);

/// Σ_{t<n−lag} (x_t − mean)(x_{t+lag} − mean) for lag = 0..max_lag.
Vector autocovariance_sums(std::span<const double> x, double mean, std::size_t max_lag);

}  // namespace serial

namespace parallel {

double logistic_nll(const RowMatrix& design, const Vector& labels, const Vector& w);
Vector logistic_nll_gradient(const RowMatrix& design, const Vector& labels, const Vector& w);
double quadratic_kernel_sum(const RowMatrix& x, const RowMatrix& y);
Vector autocovariance_sums(std::span<const double> x, double mean, std::size_t max_lag);

}  // namespace parallel

/// Numerically stable log(1 + e^a).
inline double softplus(double a) {
  return a > 0.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a));
}

inline double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

}  // namespace vhmc::kernels
