#include "vhmc/kernels.hpp"

namespace vhmc::kernels::serial {

double logistic_nll(const RowMatrix& design, const Vector& labels, const Vector& w) {
  double total = 0.0;
  for (Eigen::Index n = 0; n < design.rows(); ++n) {
    double a = 0.0;
    for (Eigen::Index j = 0; j < design.cols(); ++j) a += design(n, j) * w[j];
    total += softplus(a) - labels[n] * a;
  }
  return total;
}

Vector logistic_nll_gradient(const RowMatrix& design, const Vector& labels, const Vector& w) {
  Vector grad = Vector::Zero(design.cols());
  for (Eigen::Index n = 0; n < design.rows(); ++n) {
    double a = 0.0;
    for (Eigen::Index j = 0; j < design.cols(); ++j) a += design(n, j) * w[j];
    const double residual = sigmoid(a) - labels[n];
    for (Eigen::Index j = 0; j < design.cols(); ++j) grad[j] += residual * design(n, j);
  }
  return grad;
}

double quadratic_kernel_sum(const RowMatrix& x, const RowMatrix& y) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
      double dot = 0.0;
      for (Eigen::Index k = 0; k < x.cols(); ++k) dot += x(i, k) * y(j, k);
      total += (1.0 + dot) * (1.0 + dot);
    }
  }
  return total;
}

Vector autocovariance_sums(std::span<const double> x, double mean, std::size_t max_lag) {
  Vector sums = Vector::Zero(static_cast<Eigen::Index>(max_lag + 1));
  for (std::size_t lag = 0; lag <= max_lag && lag < x.size(); ++lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < x.size(); ++t) s += (x[t] - mean) * (x[t + lag] - mean);
    sums[static_cast<Eigen::Index>(lag)] = s;
  }
  return sums;
}

}  // namespace vhmc::kernels::serial
