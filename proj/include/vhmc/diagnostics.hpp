#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vhmc/linalg.hpp"

namespace vhmc {

/// A named metric over a lag or sample-count axis.
struct MetricSeries {
  std::string name;
  std::vector<double> index;
  std::vector<double> values;
};

/// ρ(0..max_lag), each lag the mean over dimensions of the normalized autocovariance.
/// Rows of `samples` are successive chain states.
MetricSeries autocorrelation(const Matrix& samples, std::size_t max_lag);

/// Lag at which the ESS sum stops: the first ρ(s) below this is excluded.
inline constexpr double kEssCutoff = 0.05;

/// N / (1 + 2 Σ ρ(s)) for one coordinate, truncated at the first ρ(s) < kEssCutoff or N/2.
double ess_1d(std::span<const double> x);

/// Per-dimension ESS, averaged.
double ess(const Matrix& samples);

/// (1 + ⟨x, y⟩)².
double quadratic_kernel(const Vector& x, const Vector& y);

/// Biased (V-statistic) squared MMD with the quadratic kernel, over all pairs including i = j.
double mmd2(const Matrix& x, const Matrix& y);

/// mmd2 on at most `max_points` rows of each set, drawn without replacement with `seed`.
/// max_points = 0 disables subsampling.
double mmd2_subsampled(const Matrix& x, const Matrix& y, std::size_t max_points, std::uint64_t seed);

/// REM_t = Σ_i |θ̄_i^t − θ_i*| / Σ_i |θ_i*| for t = 1..N, θ̄^t the running mean.
MetricSeries rem_series(const Matrix& samples, const Vector& true_mean);

/// Fraction of rows whose nearest (Euclidean) center is each center.
std::vector<double> mode_occupancy(const Matrix& samples, const std::vector<Vector>& centers);

/// Index of the nearest center per row.
std::vector<std::size_t> nearest_center(const Matrix& samples, const std::vector<Vector>& centers);

/// How often consecutive rows change nearest center.
std::size_t mode_switches(const Matrix& samples, const std::vector<Vector>& centers);

struct KsResult {
  double statistic;
  double p_value;
};

/// Asymptotic Kolmogorov survival function Q(λ) = 2 Σ (−1)^{k−1} exp(−2k²λ²).
double kolmogorov_survival(double lambda);

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);

/// One-sample test against N(mean, sd²).
KsResult ks_normal(std::vector<double> x, double mean = 0.0, double sd = 1.0);

}  // namespace vhmc
