#include "vhmc/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <vector>

namespace vhmc::kernels {

int max_threads() { return omp_get_max_threads(); }

namespace parallel {
namespace {

Eigen::Index block_count(Eigen::Index rows) { return (rows + kBlockRows - 1) / kBlockRows; }

// Runs body(begin, end) -> double per block and sums the partials in block order.
template <class Body>
double blocked_sum(Eigen::Index rows, Body body) {
  const Eigen::Index blocks = block_count(rows);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static) if (blocks > 1)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index begin = b * kBlockRows;
    const Eigen::Index end = std::min(rows, begin + kBlockRows);
    partial[static_cast<std::size_t>(b)] = body(begin, end);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

double logistic_nll(const RowMatrix& design, const Vector& labels, const Vector& w) {
  return blocked_sum(design.rows(), [&](Eigen::Index begin, Eigen::Index end) {
    const Vector a = design.middleRows(begin, end - begin) * w;
    double s = 0.0;
    for (Eigen::Index n = begin; n < end; ++n) s += softplus(a[n - begin]) - labels[n] * a[n - begin];
    return s;
  });
}

Vector logistic_nll_gradient(const RowMatrix& design, const Vector& labels, const Vector& w) {
  const Eigen::Index blocks = block_count(design.rows());
  std::vector<Vector> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static) if (blocks > 1)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index begin = b * kBlockRows;
    const Eigen::Index len = std::min(design.rows(), begin + kBlockRows) - begin;
    const auto rows = design.middleRows(begin, len);
    Vector residual = rows * w;
    for (Eigen::Index n = 0; n < len; ++n) residual[n] = sigmoid(residual[n]) - labels[begin + n];
    partial[static_cast<std::size_t>(b)] = rows.transpose() * residual;
  }
  Vector grad = Vector::Zero(design.cols());
  for (const Vector& p : partial) grad += p;
  return grad;
}

double quadratic_kernel_sum(const RowMatrix& x, const RowMatrix& y) {
  return blocked_sum(x.rows(), [&](Eigen::Index begin, Eigen::Index end) {
    // (1 + ⟨x_i, y_j⟩)² for one block of x rows against all of y.
    const Matrix dots = x.middleRows(begin, end - begin) * y.transpose();
    return (dots.array() + 1.0).square().sum();
  });
}

Vector autocovariance_sums(std::span<const double> x, double mean, std::size_t max_lag) {
  const auto lags = static_cast<Eigen::Index>(max_lag + 1);
  Vector sums = Vector::Zero(lags);
  std::vector<double> centered(x.begin(), x.end());
  for (double& v : centered) v -= mean;
  const auto n = static_cast<Eigen::Index>(centered.size());
  const Eigen::Map<const Vector> c(centered.data(), n);
#pragma omp parallel for schedule(static) if (lags > 8)
  for (Eigen::Index lag = 0; lag < lags; ++lag) {
    if (lag < n) sums[lag] = c.head(n - lag).dot(c.tail(n - lag));
  }
  return sums;
}

}  // namespace parallel
}  // namespace vhmc::kernels
