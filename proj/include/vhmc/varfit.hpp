#pragma once

#include <vector>

#include "vhmc/linalg.hpp"
#include "vhmc/samplers.hpp"
#include "vhmc/targets.hpp"

namespace vhmc {

struct AdamConfig {
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int max_steps = 5000;
  /// Stops once ‖∇U‖∞ drops below this.
  double grad_tol = 1e-6;
};

struct AdamResult {
  Vector theta;
  double potential;
  int steps;
};

/// Adam with bias correction on U. Throws vhmc::Error on a non-finite U or gradient.
AdamResult adam_minimize(const Target& target, const Vector& theta0, const AdamConfig& cfg);

struct Mode {
  Vector center;
  double potential;
};

struct ModeSearch {
  int n_starts = 50;
  Vector low;   // per-dimension lower corner of the start box
  Vector high;  // per-dimension upper corner
  AdamConfig adam;
  /// Merge radius, measured after dividing by the per-dimension std of the starts.
  double merge_tol = 0.5;
};

/// The [lo, hi]^dim box.
ModeSearch default_mode_search(Eigen::Index dim, double lo = -10.0, double hi = 10.0);

/// Uniform starts in the box, one Adam run per start, merged and sorted by U.
std::vector<Mode> find_modes(const Target& target, const ModeSearch& search, Rng& rng);

std::vector<Mode> find_modes_from_starts(const Target& target, const std::vector<Vector>& starts,
                                         const AdamConfig& adam, double merge_tol);

inline constexpr double kFitRidge = 1e-6;

struct GaussianFit {
  Vector mean;
  Matrix covariance;
};

/// Maximum-likelihood Gaussian of the rows, with kFitRidge·I added to the covariance.
GaussianFit fit_mode_gaussian(const Matrix& samples);

/// Mean per-sample log N(x; mean, covariance).
double average_log_likelihood(const Matrix& samples, const Vector& mean, const Matrix& covariance);

/// q(θ) and the rejection envelope c with p̃(θ) ≲ c·q(θ), p̃ = exp(−U).
struct VariationalMixture {
  GaussianMixture mixture;
  double log_envelope = 0.0;

  double envelope_c() const { return std::exp(log_envelope); }
  /// log p̃(θ) − log c − log q(θ); a draw is kept when log u is below this.
  double log_acceptance(const Target& target, const Vector& theta) const;
};

struct BuildConfig {
  ModeSearch search;
  std::size_t per_mode_samples = 2000;
  std::size_t per_mode_burn_in = 200;
  /// LHMC settings for the per-mode runs; n_samples and burn_in are overridden.
  SamplerConfig sampler;
  double envelope_safety = 1.2;
};

struct VariationalBuild {
  VariationalMixture q;
  std::vector<Mode> modes;
  std::vector<Matrix> mode_samples;  // post-burn-in LHMC draws per mode
};

/// Laplace weights w_i ∝ exp(−U(μ_i)) |Σ_i|^{1/2}, normalized.
std::vector<double> laplace_weights(const Target& target, const std::vector<GaussianFit>& fits);

VariationalBuild build_variational_detailed(const Target& target, const BuildConfig& cfg, std::uint64_t seed);
VariationalMixture build_variational(const Target& target, const BuildConfig& cfg, std::uint64_t seed);

struct RejectionDraw {
  Vector theta;
  long trials;
};

RejectionDraw rejection_sample_counted(const VariationalMixture& qmix, const Target& target, Rng& rng,
                                       long trial_cap = 100000);

/// Draws θ ~ q until u ≤ p̃(θ)/(c q(θ)). Throws EnvelopeError past `trial_cap` trials.
Vector rejection_sample(const VariationalMixture& qmix, const Target& target, Rng& rng,
                        long trial_cap = 100000);

}  // namespace vhmc
