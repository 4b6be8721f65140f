#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vhmc/config.hpp"
#include "vhmc/data.hpp"
#include "vhmc/diagnostics.hpp"
#include "vhmc/varfit.hpp"

namespace vhmc {

struct ReplicateResult {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::string error;  // empty on success
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<MetricSeries> series;
  double wall_seconds = 0.0;

  bool ok() const { return error.empty(); }
};

struct SummaryRow {
  std::string metric;
  double mean = 0.0;
  double std = 0.0;  // sample std, 0 for a single value
  std::size_t count = 0;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<ReplicateResult> replicates;
  std::vector<SummaryRow> summary;
};

/// Independent sub-stream seed derived from a replicate seed (splitmix64 of seed ⊕ stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Everything a replicate needs that does not depend on its seed.
struct PreparedExperiment {
  ExperimentConfig config;
  std::optional<Target> target;      // analytic targets
  std::optional<Dataset> dataset;    // blr: normalized full dataset
  std::optional<VariationalMixture> mixture;  // loaded from varfit.mixture_file
  Eigen::Index dim = 0;
};

/// Validates the config and loads shared inputs. Throws ConfigError or DataError.
PreparedExperiment prepare_experiment(const ExperimentConfig& cfg);

/// Replicate `index` with seed master_seed + index. Sampler errors are caught into `error`.
ReplicateResult run_replicate(const PreparedExperiment& prepared, std::size_t index);

/// Runs every replicate (up to `workers` at a time) and writes the report files
/// when `write_files` is set.
RunReport run_experiment(const ExperimentConfig& cfg, bool write_files = true);

/// Mean and std per metric, in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<ReplicateResult>& replicates);

/// report.csv, series_<metric>_<replicate>.csv, summary.csv, timing.csv, errors.csv, config.cfg.
void write_report(const RunReport& report, const std::string& dir);

/// Re-reads `dir`/report.csv and writes `dir`/aggregate.csv.
std::vector<SummaryRow> reaggregate(const std::string& dir);

/// Builds the variational mixture the vhmc sampler would use (seeded by master_seed).
VariationalBuild fit_experiment_mixture(const ExperimentConfig& cfg);

}  // namespace vhmc
