#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vhmc/linalg.hpp"

namespace vhmc {

/// A differentiable unnormalized density exp(−U(θ)).
///
/// Targets are immutable once built and may be shared read-only between
/// concurrently running chains; every randomized call takes the caller's Rng.
class Target {
 public:
  using PotentialFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;
  using SamplerFn = std::function<Vector(Rng&)>;

  Target(std::string name, Eigen::Index dim, PotentialFn potential, GradientFn gradient);

  const std::string& name() const { return name_; }
  Eigen::Index dim() const { return dim_; }

  double potential(const Vector& theta) const { return potential_(theta); }
  Vector gradient(const Vector& theta) const { return gradient_(theta); }

  const std::optional<Vector>& exact_mean() const { return exact_mean_; }
  bool has_exact_sampler() const { return static_cast<bool>(exact_sampler_); }
  Vector draw_exact(Rng& rng) const;

  /// Known density modes (mixture means); empty when unknown.
  const std::vector<Vector>& mode_centers() const { return mode_centers_; }

  Target& with_exact_mean(Vector mean);
  Target& with_exact_sampler(SamplerFn sampler);
  Target& with_mode_centers(std::vector<Vector> centers);

 private:
  std::string name_;
  Eigen::Index dim_;
  PotentialFn potential_;
  GradientFn gradient_;
  std::optional<Vector> exact_mean_;
  SamplerFn exact_sampler_;
  std::vector<Vector> mode_centers_;
};

struct GaussianMixtureSpec {
  std::vector<double> weights;
  std::vector<Vector> means;
  std::vector<Matrix> covariances;

  /// Throws vhmc::Error naming the first violated invariant.
  void validate() const;
};

/// Normalized Gaussian mixture density evaluated in log space.
class GaussianMixture {
 public:
  explicit GaussianMixture(const GaussianMixtureSpec& spec);

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return components_.size(); }

  double log_density(const Vector& x) const;
  /// ∇ log q(x).
  Vector log_density_gradient(const Vector& x) const;
  Vector sample(Rng& rng) const;
  Vector mean() const;

  const GaussianMixtureSpec& spec() const { return spec_; }

 private:
  struct Component {
    double log_weight;
    Vector mean;
    Matrix lower;  // Cholesky factor of the covariance
    double log_normalizer;
  };

  // log π_i + log N(x; μ_i, Σ_i) per component, plus the whitened residuals.
  Vector component_log_terms(const Vector& x, std::vector<Vector>* whitened) const;

  GaussianMixtureSpec spec_;
  Eigen::Index dim_;
  std::vector<Component> components_;
  std::vector<double> cumulative_weights_;
};

double log_sum_exp(const Vector& terms);

/// U(θ) = −ln Σ_i π_i N(θ; μ_i, Σ_i). Carries exact mean, exact sampler and mode centers.
Target make_gaussian_mixture(const GaussianMixtureSpec& spec);

/// R diag(variances) Rᵀ with R the planar rotation by `angle`.
Matrix rotated_covariance(const std::array<double, 2>& variances, double angle);

/// Zero-mean Gaussian with covariance rotated_covariance(variances, angle).
Target make_rotated_gaussian(const std::array<double, 2>& variances, double angle);

struct BlrModel {
  RowMatrix features;  // N×d, normalized upstream
  Vector labels;       // t_n ∈ {0, 1}
  double prior_variance = 100.0;
  /// Appends a constant-one column, giving the model a bias weight (last coordinate of w).
  bool intercept = false;

  void validate() const;
};

/// Design matrix seen by the likelihood: features, plus the bias column when enabled.
RowMatrix blr_design(const BlrModel& model);

/// Bayesian logistic regression posterior with an isotropic Gaussian prior.
Target make_blr_target(const BlrModel& model);

/// n independent draws as the rows of an n×d matrix.
Matrix exact_sample(const Target& target, Eigen::Index n, Rng& rng);

}  // namespace vhmc
