#include "vhmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vhmc/errors.hpp"
#include "vhmc/kernels.hpp"

namespace vhmc {
namespace {

std::vector<double> column(const Matrix& samples, Eigen::Index j) {
  std::vector<double> out(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index i = 0; i < samples.rows(); ++i) out[static_cast<std::size_t>(i)] = samples(i, j);
  return out;
}

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

Vector normalized_autocorrelation(std::span<const double> x, std::size_t max_lag) {
  const Vector sums = kernels::parallel::autocovariance_sums(x, mean_of(x), max_lag);
  if (!(sums[0] > 0.0)) throw Error("autocorrelation undefined for a zero-variance chain");
  return sums / sums[0];
}

}  // namespace

MetricSeries autocorrelation(const Matrix& samples, std::size_t max_lag) {
  if (static_cast<std::size_t>(samples.rows()) < max_lag + 2)
    throw Error("autocorrelation needs at least max_lag + 2 samples");
  MetricSeries out{"autocorrelation", {}, std::vector<double>(max_lag + 1, 0.0)};
  for (std::size_t s = 0; s <= max_lag; ++s) out.index.push_back(static_cast<double>(s));
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    const std::vector<double> x = column(samples, j);
    const Vector rho = normalized_autocorrelation(x, max_lag);
    for (std::size_t s = 0; s <= max_lag; ++s) out.values[s] += rho[static_cast<Eigen::Index>(s)];
  }
  for (double& v : out.values) v /= static_cast<double>(samples.cols());
  out.values[0] = 1.0;
  return out;
}

double ess_1d(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw Error("ESS needs at least 2 samples");
  const std::size_t cap = n / 2;
  std::size_t window = std::min<std::size_t>(64, cap);
  for (;;) {
    const Vector rho = normalized_autocorrelation(x, window);
    double sum = 0.0;
    std::size_t s = 1;
    for (; s <= window; ++s) {
      if (rho[static_cast<Eigen::Index>(s)] < kEssCutoff) break;
      sum += rho[static_cast<Eigen::Index>(s)];
    }
    if (s <= window || window >= cap) return static_cast<double>(n) / (1.0 + 2.0 * sum);
    window = std::min(cap, window * 2);
  }
}

double ess(const Matrix& samples) {
  if (samples.cols() == 0) throw Error("ESS needs at least one dimension");
  double total = 0.0;
  for (Eigen::Index j = 0; j < samples.cols(); ++j) total += ess_1d(column(samples, j));
  return total / static_cast<double>(samples.cols());
}

double quadratic_kernel(const Vector& x, const Vector& y) {
  const double k = 1.0 + x.dot(y);
  return k * k;
}

double mmd2(const Matrix& x, const Matrix& y) {
  if (x.rows() == 0 || y.rows() == 0) throw Error("MMD needs two nonempty sample sets");
  if (x.cols() != y.cols()) throw Error("MMD sample sets differ in dimension");
  const RowMatrix xr = x;
  const RowMatrix yr = y;
  const auto m = static_cast<double>(x.rows());
  const auto n = static_cast<double>(y.rows());
  return kernels::parallel::quadratic_kernel_sum(xr, xr) / (m * m) -
         2.0 * kernels::parallel::quadratic_kernel_sum(xr, yr) / (m * n) +
         kernels::parallel::quadratic_kernel_sum(yr, yr) / (n * n);
}

double mmd2_subsampled(const Matrix& x, const Matrix& y, std::size_t max_points, std::uint64_t seed) {
  auto pick = [&](const Matrix& s, Rng& rng) -> Matrix {
    if (max_points == 0 || static_cast<std::size_t>(s.rows()) <= max_points) return s;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(s.rows()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(max_points);
    std::sort(idx.begin(), idx.end());
    Matrix out(static_cast<Eigen::Index>(max_points), s.cols());
    for (std::size_t i = 0; i < max_points; ++i) out.row(static_cast<Eigen::Index>(i)) = s.row(idx[i]);
    return out;
  };
  Rng rng(seed);
  const Matrix xs = pick(x, rng);
  const Matrix ys = pick(y, rng);
  return mmd2(xs, ys);
}

MetricSeries rem_series(const Matrix& samples, const Vector& true_mean) {
  if (true_mean.size() != samples.cols()) throw Error("true mean dimension does not match the samples");
  const double denom = true_mean.lpNorm<1>();
  if (!(denom > 0.0)) throw Error("REM undefined: the true mean has zero L1 norm");
  MetricSeries out{"rem", {}, {}};
  Vector running = Vector::Zero(samples.cols());
  for (Eigen::Index t = 0; t < samples.rows(); ++t) {
    running += samples.row(t).transpose();
    const Vector avg = running / static_cast<double>(t + 1);
    out.index.push_back(static_cast<double>(t + 1));
    out.values.push_back((avg - true_mean).lpNorm<1>() / denom);
  }
  return out;
}

std::vector<std::size_t> nearest_center(const Matrix& samples, const std::vector<Vector>& centers) {
  if (centers.empty()) throw Error("mode occupancy needs at least one center");
  std::vector<std::size_t> out(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    std::size_t best = 0;
    double best_d = (samples.row(i).transpose() - centers[0]).squaredNorm();
    for (std::size_t c = 1; c < centers.size(); ++c) {
      const double d = (samples.row(i).transpose() - centers[c]).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

std::vector<double> mode_occupancy(const Matrix& samples, const std::vector<Vector>& centers) {
  const std::vector<std::size_t> nearest = nearest_center(samples, centers);
  std::vector<double> occ(centers.size(), 0.0);
  for (std::size_t c : nearest) occ[c] += 1.0;
  if (!nearest.empty()) {
    for (double& v : occ) v /= static_cast<double>(nearest.size());
  }
  return occ;
}

std::size_t mode_switches(const Matrix& samples, const std::vector<Vector>& centers) {
  const std::vector<std::size_t> nearest = nearest_center(samples, centers);
  std::size_t switches = 0;
  for (std::size_t i = 1; i < nearest.size(); ++i) switches += nearest[i] != nearest[i - 1] ? 1 : 0;
  return switches;
}

double kolmogorov_survival(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error("KS test needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb))};
}

KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw Error("KS test needs a nonempty sample");
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n)};
}

KsResult ks_normal(std::vector<double> x, double mean, double sd) {
  return ks_one_sample(std::move(x), [=](double v) { return 0.5 * std::erfc(-(v - mean) / (sd * std::sqrt(2.0))); });
}

}  // namespace vhmc
