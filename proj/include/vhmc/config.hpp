#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vhmc/samplers.hpp"
#include "vhmc/targets.hpp"
#include "vhmc/varfit.hpp"

namespace vhmc {

using Array1 = std::vector<double>;
using Array2 = std::vector<Array1>;
using Array3 = std::vector<Array2>;

struct SourceDir {
  std::string path;
  bool operator==(const SourceDir&) const { return true; }
};

struct TargetConfig {
  std::string kind = "mixture";  // mixture | rotated-gaussian | blr

  Array1 weights;
  Array2 means;
  Array3 covariances;

  Array1 variances{100.0, 0.01};
  double angle = 0.78539816339744828;

  std::string dataset;
  std::string label_column = "-1";
  std::string positive_label = "1";
  double prior_variance = 100.0;
  bool intercept = true;
  double test_fraction = 0.2;

  bool operator==(const TargetConfig&) const = default;
};

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  TargetConfig target;
  std::string sampler = "hmc";  // hmc | lhmc | lhmc-et | vhmc | parallel-hmc

  Array1 init;   // empty: origin
  Array2 inits;  // parallel-hmc starts; empty: the target's mode centers

  double step_size = 0.05;
  int leapfrog_steps = 100;
  int leapfrog_jitter = 20;
  Array1 mass{1.0};  // one entry broadcasts to every dimension
  double friction = 0.5;
  double inverse_temperature = 1.0;
  std::size_t n_samples = 11000;
  std::size_t burn_in = 1000;
  double beta_mix = 0.1;
  double et_sigma = 1.0;
  int et_iterations = 10;
  double et_tolerance = 0.01;
  int rejection_estimate_draws = 1;
  long rejection_trial_cap = 100000;

  int varfit_n_starts = 50;
  double varfit_start_low = -10.0;
  double varfit_start_high = 10.0;
  std::size_t varfit_per_mode_samples = 2000;
  std::size_t varfit_per_mode_burn_in = 200;
  double varfit_envelope_safety = 1.2;
  double varfit_learning_rate = 0.05;
  int varfit_max_steps = 5000;
  double varfit_grad_tol = 1e-6;
  double varfit_merge_tol = 0.5;
  std::string varfit_mixture_file;  // load a serialized mixture instead of fitting

  std::size_t n_replicates = 1;
  std::uint64_t master_seed = 0;
  int workers = 1;
  std::vector<std::string> metrics;

  std::size_t acf_max_lag = 50;
  std::size_t acf_report_lag = 10;
  std::size_t mmd_max_points = 2000;
  std::size_t mmd_reference_samples = 0;  // 0: as many as the kept chain
  std::vector<std::size_t> mmd_checkpoints;
  std::size_t rem_stride = 1;

  std::string output_dir = "out";

  /// Directory of the file the config came from; relative dataset paths fall back to it.
  /// Not part of the experiment's identity.
  SourceDir base_dir;

  bool operator==(const ExperimentConfig&) const = default;
};

inline const std::vector<std::string>& known_metrics() {
  static const std::vector<std::string> names{"autocorrelation", "ess", "mmd", "rem",
                                              "occupancy", "accuracy", "auc"};
  return names;
}

/// Parses `key = value` lines; `#` starts a comment, bracketed values may span lines.
/// Throws ConfigError listing every unknown key and malformed value.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical text form; parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& cfg);

/// Every violated invariant, empty when the config is runnable.
std::vector<std::string> config_violations(const ExperimentConfig& cfg);
/// Throws ConfigError with one line per violation.
void validate_config(const ExperimentConfig& cfg);

GaussianMixtureSpec mixture_spec(const TargetConfig& target);
SamplerConfig sampler_config(const ExperimentConfig& cfg, Eigen::Index dim);
BuildConfig build_config(const ExperimentConfig& cfg, Eigen::Index dim);

/// Resolves a config-relative path: as given if it exists, else relative to base_dir.
std::string resolve_path(const ExperimentConfig& cfg, const std::string& path);

std::string format_double(double v);

/// variational.weights / .means / .covariances / .log_envelope lines.
std::string mixture_to_text(const VariationalMixture& q);
VariationalMixture parse_mixture(const std::string& text);
VariationalMixture load_mixture_file(const std::string& path);

}  // namespace vhmc
