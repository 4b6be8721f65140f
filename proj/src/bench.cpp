#include "vhmc/bench.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "vhmc/errors.hpp"
#include "vhmc/samplers.hpp"

namespace vhmc {
namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kBuildStream = 2;
constexpr std::uint64_t kReferenceStream = 3;
constexpr std::uint64_t kSubsampleStream = 4;

Vector initial_point(const ExperimentConfig& cfg, Eigen::Index dim) {
  if (cfg.init.empty()) return Vector::Zero(dim);
  return Eigen::Map<const Vector>(cfg.init.data(), static_cast<Eigen::Index>(cfg.init.size()));
}

std::vector<Vector> parallel_inits(const ExperimentConfig& cfg, const Target& target) {
  if (cfg.inits.empty()) return target.mode_centers();
  std::vector<Vector> out;
  for (const Array1& s : cfg.inits) out.push_back(Eigen::Map<const Vector>(s.data(), static_cast<Eigen::Index>(s.size())));
  return out;
}

Target analytic_target(const ExperimentConfig& cfg) {
  if (cfg.target.kind == "mixture") return make_gaussian_mixture(mixture_spec(cfg.target));
  return make_rotated_gaussian({cfg.target.variances[0], cfg.target.variances[1]}, cfg.target.angle);
}

Target blr_target(const ExperimentConfig& cfg, const Dataset& train) {
  BlrModel model;
  model.features = train.features;
  model.labels = train.labels;
  model.prior_variance = cfg.target.prior_variance;
  model.intercept = cfg.target.intercept;
  return make_blr_target(model);
}

Chain run_sampler(const ExperimentConfig& cfg, const Target& target, const SamplerConfig& sc,
                  const std::optional<VariationalMixture>& preloaded, std::uint64_t seed) {
  const Vector init = initial_point(cfg, target.dim());
  if (cfg.sampler == "hmc") return drop_prefix(hmc_chain(target, init, sc, seed), sc.burn_in);
  if (cfg.sampler == "lhmc") return drop_prefix(lhmc_chain(target, init, sc, seed), sc.burn_in);
  if (cfg.sampler == "lhmc-et") return drop_prefix(lhmc_et_chain(target, init, sc, seed), sc.burn_in);
  if (cfg.sampler == "parallel-hmc") return parallel_hmc(target, parallel_inits(cfg, target), sc, seed);
  const VariationalMixture q =
      preloaded ? *preloaded : build_variational(target, build_config(cfg, target.dim()), derive_seed(seed, kBuildStream));
  if (q.mixture.dim() != target.dim()) throw ConfigError("variational mixture dimension does not match the target");
  return drop_prefix(vhmc_chain(target, init, q, sc, seed), sc.burn_in);
}

void compute_metrics(const ExperimentConfig& cfg, const Target& target, const Chain& chain,
                     const std::optional<Dataset>& test, ReplicateResult& out) {
  auto record = [&](const std::string& name, double v) { out.metrics.emplace_back(name, v); };
  const Matrix& x = chain.samples;
  record("kept_samples", static_cast<double>(x.rows()));
  record("acceptance_rate", chain.acceptance_rate);
  record("divergences", static_cast<double>(chain.divergence_count()));
  if (cfg.sampler == "vhmc")
    record("variational_fraction", static_cast<double>(chain.variational_branch_count) /
                                       static_cast<double>(cfg.n_samples));

  for (const std::string& m : cfg.metrics) {
    if (m == "autocorrelation") {
      MetricSeries acf = autocorrelation(x, cfg.acf_max_lag);
      record("autocorrelation", acf.values[cfg.acf_report_lag]);
      out.series.push_back(std::move(acf));
    } else if (m == "ess") {
      record("ess", ess(x));
    } else if (m == "mmd") {
      Rng ref_rng(derive_seed(out.seed, kReferenceStream));
      const Eigen::Index n_ref =
          cfg.mmd_reference_samples ? static_cast<Eigen::Index>(cfg.mmd_reference_samples) : x.rows();
      const Matrix reference = exact_sample(target, n_ref, ref_rng);
      const std::uint64_t sub_seed = derive_seed(out.seed, kSubsampleStream);
      record("mmd", mmd2_subsampled(x, reference, cfg.mmd_max_points, sub_seed));
      if (!cfg.mmd_checkpoints.empty()) {
        MetricSeries s{"mmd", {}, {}};
        for (std::size_t c : cfg.mmd_checkpoints) {
          const auto rows = static_cast<Eigen::Index>(c);
          const Eigen::Index ref_rows = std::min(rows, reference.rows());
          s.index.push_back(static_cast<double>(c));
          s.values.push_back(mmd2_subsampled(x.topRows(rows), reference.topRows(ref_rows), cfg.mmd_max_points, sub_seed));
        }
        out.series.push_back(std::move(s));
      }
    } else if (m == "rem") {
      MetricSeries full = rem_series(x, *target.exact_mean());
      record("rem", full.values.back());
      MetricSeries s{"rem", {}, {}};
      for (std::size_t t = cfg.rem_stride - 1; t < full.values.size(); t += cfg.rem_stride) {
        s.index.push_back(full.index[t]);
        s.values.push_back(full.values[t]);
      }
      out.series.push_back(std::move(s));
    } else if (m == "occupancy") {
      const auto occ = mode_occupancy(x, target.mode_centers());
      for (std::size_t k = 0; k < occ.size(); ++k) record("occupancy_" + std::to_string(k), occ[k]);
      record("mode_switches", static_cast<double>(mode_switches(x, target.mode_centers())));
    }
  }

  const bool wants_acc = std::find(cfg.metrics.begin(), cfg.metrics.end(), "accuracy") != cfg.metrics.end();
  const bool wants_auc = std::find(cfg.metrics.begin(), cfg.metrics.end(), "auc") != cfg.metrics.end();
  if ((wants_acc || wants_auc) && test) {
    const ClassifierMetrics cm = evaluate_classifier(x, *test, cfg.target.intercept);
    if (wants_acc) record("accuracy", cm.accuracy);
    if (wants_auc) {
      if (!cm.auc) throw Error("AUC undefined: test set contains a single class");
      record("auc", *cm.auc);
    }
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

void write_summary(const std::string& path, const std::string& experiment_id, const std::vector<SummaryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "experiment_id,metric,mean,std,count\n";
  for (const SummaryRow& r : rows)
    out << csv_escape(experiment_id) << ',' << r.metric << ',' << format_double(r.mean) << ','
        << format_double(r.std) << ',' << r.count << '\n';
}

std::vector<SummaryRow> summarize_values(const std::vector<std::pair<std::string, std::vector<double>>>& grouped) {
  std::vector<SummaryRow> out;
  for (const auto& [metric, values] : grouped) {
    SummaryRow r;
    r.metric = metric;
    r.count = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    r.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - r.mean) * (v - r.mean);
      r.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    out.push_back(std::move(r));
  }
  return out;
}

void add_value(std::vector<std::pair<std::string, std::vector<double>>>& grouped, const std::string& metric,
               double v) {
  auto it = std::find_if(grouped.begin(), grouped.end(), [&](const auto& g) { return g.first == metric; });
  if (it == grouped.end()) grouped.emplace_back(metric, std::vector<double>{v});
  else it->second.push_back(v);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (stream * 0x9E3779B97F4A7C15ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PreparedExperiment prepare_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  PreparedExperiment p;
  p.config = cfg;
  if (cfg.target.kind == "blr") {
    const std::string path = resolve_path(cfg, cfg.target.dataset);
    p.dataset = normalize(load_csv(path, cfg.target.label_column, cfg.target.positive_label));
    p.dim = p.dataset->dim() + (cfg.target.intercept ? 1 : 0);
  } else {
    p.target = analytic_target(cfg);
    p.dim = p.target->dim();
  }
  std::vector<std::string> problems;
  if (cfg.mass.size() != 1 && static_cast<Eigen::Index>(cfg.mass.size()) != p.dim)
    problems.push_back("mass must have 1 or " + std::to_string(p.dim) + " entries");
  if (!cfg.init.empty() && static_cast<Eigen::Index>(cfg.init.size()) != p.dim)
    problems.push_back("init must have " + std::to_string(p.dim) + " entries");
  if (cfg.sampler == "vhmc" && !cfg.varfit_mixture_file.empty()) {
    p.mixture = load_mixture_file(resolve_path(cfg, cfg.varfit_mixture_file));
    if (p.mixture->mixture.dim() != p.dim) problems.push_back("variational mixture dimension does not match the target");
  }
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& s : problems) msg += "\n  " + s;
    throw ConfigError(msg);
  }
  return p;
}

ReplicateResult run_replicate(const PreparedExperiment& prepared, std::size_t index) {
  const ExperimentConfig& cfg = prepared.config;
  ReplicateResult out;
  out.replicate = index;
  out.seed = cfg.master_seed + index;
  const auto start = std::chrono::steady_clock::now();
  try {
    std::optional<Dataset> test;
    std::optional<Target> local;
    if (prepared.dataset) {
      Rng split_rng(derive_seed(out.seed, kSplitStream));
      DataSplit parts = split(*prepared.dataset, cfg.target.test_fraction, split_rng);
      local = blr_target(cfg, parts.train);
      test = std::move(parts.test);
    }
    const Target& target = local ? *local : *prepared.target;
    const SamplerConfig sc = sampler_config(cfg, target.dim());
    const Chain chain = run_sampler(cfg, target, sc, prepared.mixture, out.seed);
    compute_metrics(cfg, target, chain, test, out);
  } catch (const std::exception& e) {
    out.error = e.what();
    out.metrics.clear();
    out.series.clear();
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

RunReport run_experiment(const ExperimentConfig& cfg, bool write_files) {
  const PreparedExperiment prepared = prepare_experiment(cfg);
  RunReport report;
  report.config = cfg;
  report.replicates.resize(cfg.n_replicates);
  const auto n = static_cast<long>(cfg.n_replicates);
#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.workers)
  for (long i = 0; i < n; ++i) {
    report.replicates[static_cast<std::size_t>(i)] = run_replicate(prepared, static_cast<std::size_t>(i));
  }
  for (const ReplicateResult& r : report.replicates) {
    if (!r.ok()) std::cerr << "[bench] replicate " << r.replicate << " failed: " << r.error << "\n";
  }
  report.summary = summarize(report.replicates);
  if (write_files) write_report(report, cfg.output_dir);
  return report;
}

std::vector<SummaryRow> summarize(const std::vector<ReplicateResult>& replicates) {
  std::vector<std::pair<std::string, std::vector<double>>> grouped;
  for (const ReplicateResult& r : replicates) {
    for (const auto& [metric, v] : r.metrics) add_value(grouped, metric, v);
  }
  return summarize_values(grouped);
}

void write_report(const RunReport& report, const std::string& dir) {
  fs::create_directories(dir);
  const std::string id = csv_escape(report.config.experiment_id);
  {
    std::ofstream out(fs::path(dir) / "report.csv");
    if (!out) throw Error("cannot write report.csv in " + dir);
    out << "experiment_id,replicate,metric,value\n";
    for (const ReplicateResult& r : report.replicates) {
      for (const auto& [metric, v] : r.metrics)
        out << id << ',' << r.replicate << ',' << metric << ',' << format_double(v) << '\n';
    }
  }
  for (const ReplicateResult& r : report.replicates) {
    for (const MetricSeries& s : r.series) {
      std::ofstream out(fs::path(dir) / ("series_" + s.name + "_" + std::to_string(r.replicate) + ".csv"));
      out << "index,value\n";
      for (std::size_t k = 0; k < s.values.size(); ++k)
        out << format_double(s.index[k]) << ',' << format_double(s.values[k]) << '\n';
    }
  }
  write_summary((fs::path(dir) / "summary.csv").string(), report.config.experiment_id, report.summary);
  {
    std::ofstream out(fs::path(dir) / "timing.csv");
    out << "replicate,seed,wall_seconds\n";
    for (const ReplicateResult& r : report.replicates)
      out << r.replicate << ',' << r.seed << ',' << format_double(r.wall_seconds) << '\n';
  }
  {
    std::ofstream out(fs::path(dir) / "errors.csv");
    out << "replicate,seed,message\n";
    for (const ReplicateResult& r : report.replicates) {
      if (!r.ok()) out << r.replicate << ',' << r.seed << ',' << csv_escape(r.error) << '\n';
    }
  }
  {
    std::ofstream out(fs::path(dir) / "config.cfg");
    out << to_text(report.config);
  }
}

std::vector<SummaryRow> reaggregate(const std::string& dir) {
  const fs::path path = fs::path(dir) / "report.csv";
  std::ifstream in(path);
  if (!in) throw Error("no report.csv in " + dir);
  std::string line;
  std::getline(in, line);
  if (line != "experiment_id,replicate,metric,value") throw Error("unexpected report.csv header in " + dir);
  std::vector<std::pair<std::string, std::vector<double>>> grouped;
  std::string experiment_id;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    // experiment_id may be quoted; the last three fields never are.
    const auto c3 = line.rfind(',');
    const auto c2 = c3 == std::string::npos ? c3 : line.rfind(',', c3 - 1);
    const auto c1 = c2 == std::string::npos || c2 == 0 ? std::string::npos : line.rfind(',', c2 - 1);
    if (c1 == std::string::npos) throw Error("malformed report.csv line " + std::to_string(line_no));
    experiment_id = line.substr(0, c1);
    if (experiment_id.size() >= 2 && experiment_id.front() == '"')
      experiment_id = experiment_id.substr(1, experiment_id.size() - 2);
    const std::string metric = line.substr(c2 + 1, c3 - c2 - 1);
    const std::string value = line.substr(c3 + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty())
      throw Error("malformed value on report.csv line " + std::to_string(line_no));
    add_value(grouped, metric, v);
  }
  const auto rows = summarize_values(grouped);
  write_summary((fs::path(dir) / "aggregate.csv").string(), experiment_id, rows);
  return rows;
}

VariationalBuild fit_experiment_mixture(const ExperimentConfig& cfg) {
  validate_config(cfg);
  std::optional<Target> target;
  if (cfg.target.kind == "blr") {
    const Dataset ds = normalize(load_csv(resolve_path(cfg, cfg.target.dataset), cfg.target.label_column,
                                          cfg.target.positive_label));
    target = blr_target(cfg, ds);
  } else {
    target = analytic_target(cfg);
  }
  return build_variational_detailed(*target, build_config(cfg, target->dim()),
                                    derive_seed(cfg.master_seed, kBuildStream));
}

}  // namespace vhmc
