#include "vhmc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vhmc/errors.hpp"

namespace vhmc {
namespace {

using nlohmann::json;

struct Entry {
  int line;
  std::string key;
  std::string value;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) return line.substr(0, i);
  }
  return line;
}

int bracket_depth(const std::string& s) {
  int depth = 0;
  for (char c : s) {
    if (c == '[' || c == '{') ++depth;
    if (c == ']' || c == '}') --depth;
  }
  return depth;
}

std::vector<Entry> tokenize(const std::string& text, std::vector<std::string>& problems) {
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    Entry e{line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    while (bracket_depth(e.value) > 0 && std::getline(in, raw)) {
      ++line_no;
      e.value += " " + trim(strip_comment(raw));
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return json::parse(v).get<std::string>();
  return v;
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string array_text(const json& j) {
  if (!j.is_array()) return shortest(j.get<double>());
  std::string out = "[";
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (i) out += ", ";
    out += array_text(j[i]);
  }
  return out + "]";
}

json parse_json(const std::string& v) {
  try {
    return json::parse(v);
  } catch (const json::exception&) {
    throw ConfigError("malformed value '" + v + "'");
  }
}

double as_double(const std::string& v) {
  const json j = parse_json(v);
  if (!j.is_number()) throw ConfigError("expected a number, got '" + v + "'");
  return j.get<double>();
}

long long as_integer(const std::string& v) {
  const json j = parse_json(v);
  if (!j.is_number_integer()) throw ConfigError("expected an integer, got '" + v + "'");
  return j.get<long long>();
}

std::uint64_t as_count(const std::string& v) {
  const json j = parse_json(v);
  if (!j.is_number_unsigned()) throw ConfigError("expected a nonnegative integer, got '" + v + "'");
  return j.get<std::uint64_t>();
}

bool as_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

template <class T>
T as_array(const std::string& v) {
  const json j = parse_json(v);
  try {
    if (j.is_number()) {
      if constexpr (std::is_same_v<T, Array1>) return Array1{j.get<double>()};
    }
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("malformed array '" + v + "'");
  }
}

std::vector<std::string> as_list(const std::string& v) {
  std::vector<std::string> out;
  if (!v.empty() && v.front() == '[') {
    try {
      return parse_json(v).get<std::vector<std::string>>();
    } catch (const json::exception&) {
      throw ConfigError("malformed list '" + v + "'");
    }
  }
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string list_text(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Field real_field(std::string key, T ExperimentConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.*member = as_double(v); },
          [member](const ExperimentConfig& c) { return shortest(c.*member); }};
}

template <class T>
Field int_field(std::string key, T ExperimentConfig::*member) {
  return {std::move(key),
          [member](ExperimentConfig& c, const std::string& v) {
            if constexpr (std::is_unsigned_v<T>) c.*member = static_cast<T>(as_count(v));
            else c.*member = static_cast<T>(as_integer(v));
          },
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

Field string_field(std::string key, std::string ExperimentConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.*member = unquote(v); },
          [member](const ExperimentConfig& c) { return c.*member; }};
}

template <class T>
Field target_real(std::string key, T TargetConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.target.*member = as_double(v); },
          [member](const ExperimentConfig& c) { return shortest(c.target.*member); }};
}

Field target_string(std::string key, std::string TargetConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.target.*member = unquote(v); },
          [member](const ExperimentConfig& c) { return c.target.*member; }};
}

template <class T>
Field target_array(std::string key, T TargetConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.target.*member = as_array<T>(v); },
          [member](const ExperimentConfig& c) { return array_text(json(c.target.*member)); }};
}

template <class T>
Field array_field(std::string key, T ExperimentConfig::*member) {
  return {std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.*member = as_array<T>(v); },
          [member](const ExperimentConfig& c) { return array_text(json(c.*member)); }};
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  using T = TargetConfig;
  static const std::vector<Field> table{
      string_field("experiment_id", &C::experiment_id),
      target_string("target", &T::kind),
      target_array("mixture.weights", &T::weights),
      target_array("mixture.means", &T::means),
      target_array("mixture.covariances", &T::covariances),
      target_array("rotated.variances", &T::variances),
      target_real("rotated.angle", &T::angle),
      target_string("blr.dataset", &T::dataset),
      target_string("blr.label_column", &T::label_column),
      target_string("blr.positive_label", &T::positive_label),
      target_real("blr.prior_variance", &T::prior_variance),
      {"blr.intercept", [](C& c, const std::string& v) { c.target.intercept = as_bool(v); },
       [](const C& c) { return std::string(c.target.intercept ? "true" : "false"); }},
      target_real("blr.test_fraction", &T::test_fraction),
      string_field("sampler", &C::sampler),
      array_field("init", &C::init),
      array_field("inits", &C::inits),
      real_field("step_size", &C::step_size),
      int_field("leapfrog_steps", &C::leapfrog_steps),
      int_field("leapfrog_jitter", &C::leapfrog_jitter),
      array_field("mass", &C::mass),
      real_field("friction", &C::friction),
      real_field("inverse_temperature", &C::inverse_temperature),
      int_field("n_samples", &C::n_samples),
      int_field("burn_in", &C::burn_in),
      real_field("beta", &C::beta_mix),
      real_field("et.sigma", &C::et_sigma),
      int_field("et.iterations", &C::et_iterations),
      real_field("et.tolerance", &C::et_tolerance),
      int_field("rejection_estimate_draws", &C::rejection_estimate_draws),
      int_field("rejection_trial_cap", &C::rejection_trial_cap),
      int_field("varfit.n_starts", &C::varfit_n_starts),
      real_field("varfit.start_low", &C::varfit_start_low),
      real_field("varfit.start_high", &C::varfit_start_high),
      int_field("varfit.per_mode_samples", &C::varfit_per_mode_samples),
      int_field("varfit.per_mode_burn_in", &C::varfit_per_mode_burn_in),
      real_field("varfit.envelope_safety", &C::varfit_envelope_safety),
      real_field("varfit.learning_rate", &C::varfit_learning_rate),
      int_field("varfit.max_steps", &C::varfit_max_steps),
      real_field("varfit.grad_tol", &C::varfit_grad_tol),
      real_field("varfit.merge_tol", &C::varfit_merge_tol),
      string_field("varfit.mixture_file", &C::varfit_mixture_file),
      int_field("n_replicates", &C::n_replicates),
      int_field("master_seed", &C::master_seed),
      int_field("workers", &C::workers),
      {"metrics", [](C& c, const std::string& v) { c.metrics = as_list(v); },
       [](const C& c) { return list_text(c.metrics); }},
      int_field("autocorrelation.max_lag", &C::acf_max_lag),
      int_field("autocorrelation.report_lag", &C::acf_report_lag),
      int_field("mmd.max_points", &C::mmd_max_points),
      int_field("mmd.reference_samples", &C::mmd_reference_samples),
      array_field("mmd.checkpoints", &C::mmd_checkpoints),
      int_field("rem.stride", &C::rem_stride),
      string_field("output_dir", &C::output_dir),
  };
  return table;
}

Eigen::Index config_dim(const ExperimentConfig& cfg) {
  if (cfg.target.kind == "mixture" && !cfg.target.means.empty())
    return static_cast<Eigen::Index>(cfg.target.means.front().size());
  if (cfg.target.kind == "rotated-gaussian") return 2;
  return -1;  // blr: known only once the dataset is read
}

Vector to_vector(const Array1& a) { return Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(a.size())); }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ExperimentConfig parse_config(const std::string& text) {
  std::vector<std::string> problems;
  const auto entries = tokenize(text, problems);
  std::map<std::string, const Field*> by_key;
  for (const Field& f : fields()) by_key[f.key] = &f;
  ExperimentConfig cfg;
  std::set<std::string> seen;
  for (const Entry& e : entries) {
    const std::string where = "line " + std::to_string(e.line) + ": ";
    const auto it = by_key.find(e.key);
    if (it == by_key.end()) {
      problems.push_back(where + "unknown key '" + e.key + "'");
      continue;
    }
    if (!seen.insert(e.key).second) problems.push_back(where + "duplicate key '" + e.key + "'");
    try {
      it->second->set(cfg, e.value);
    } catch (const ConfigError& err) {
      problems.push_back(where + e.key + ": " + err.what());
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse_config(ss.str());
  cfg.base_dir.path = std::filesystem::path(path).parent_path().string();
  return cfg;
}

std::string to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

std::vector<std::string> config_violations(const ExperimentConfig& cfg) {
  std::vector<std::string> v;
  const TargetConfig& t = cfg.target;
  const Eigen::Index dim = config_dim(cfg);
  bool target_ok = true;

  if (t.kind == "mixture") {
    try {
      mixture_spec(t).validate();
    } catch (const Error& e) {
      v.push_back(std::string("mixture: ") + e.what());
      target_ok = false;
    }
  } else if (t.kind == "rotated-gaussian") {
    if (t.variances.size() != 2 || !(t.variances[0] > 0.0) || !(t.variances[1] > 0.0)) {
      v.push_back("rotated.variances must be two positive numbers");
      target_ok = false;
    }
  } else if (t.kind == "blr") {
    if (t.dataset.empty()) v.push_back("blr.dataset is required for target blr");
    if (!(t.prior_variance > 0.0)) v.push_back("blr.prior_variance must be positive");
    if (!(t.test_fraction > 0.0 && t.test_fraction < 1.0)) v.push_back("blr.test_fraction must lie in (0, 1)");
  } else {
    v.push_back("unknown target '" + t.kind + "' (expected mixture, rotated-gaussian or blr)");
    target_ok = false;
  }

  static const std::set<std::string> samplers{"hmc", "lhmc", "lhmc-et", "vhmc", "parallel-hmc"};
  if (!samplers.count(cfg.sampler)) v.push_back("unknown sampler '" + cfg.sampler + "'");

  if (!(cfg.step_size > 0.0)) v.push_back("step_size must be positive");
  if (cfg.leapfrog_steps < 1) v.push_back("leapfrog_steps must be at least 1");
  if (cfg.leapfrog_jitter < 0 || cfg.leapfrog_jitter >= cfg.leapfrog_steps)
    v.push_back("leapfrog_jitter must lie in [0, leapfrog_steps)");
  if (cfg.mass.empty() || std::any_of(cfg.mass.begin(), cfg.mass.end(), [](double m) { return !(m > 0.0); }))
    v.push_back("mass entries must be positive");
  if (dim > 0 && cfg.mass.size() != 1 && static_cast<Eigen::Index>(cfg.mass.size()) != dim)
    v.push_back("mass must have 1 or " + std::to_string(dim) + " entries");
  if (!(cfg.friction >= 0.0)) v.push_back("friction must be nonnegative");
  if (!(cfg.inverse_temperature > 0.0)) v.push_back("inverse_temperature must be positive");
  if (cfg.n_samples == 0) v.push_back("n_samples must be positive");
  if (cfg.burn_in >= cfg.n_samples) v.push_back("burn_in must be smaller than n_samples");
  if (!(cfg.beta_mix >= 0.0 && cfg.beta_mix <= 1.0)) v.push_back("beta must lie in [0, 1]");
  if (!(cfg.et_sigma > 0.0)) v.push_back("et.sigma must be positive");
  if (cfg.et_iterations < 1) v.push_back("et.iterations must be at least 1");
  if (!(cfg.et_tolerance > 0.0)) v.push_back("et.tolerance must be positive");
  if (cfg.rejection_estimate_draws < 1) v.push_back("rejection_estimate_draws must be at least 1");
  if (cfg.rejection_trial_cap < 1) v.push_back("rejection_trial_cap must be at least 1");
  if (dim > 0 && !cfg.init.empty() && static_cast<Eigen::Index>(cfg.init.size()) != dim)
    v.push_back("init must have " + std::to_string(dim) + " entries");
  for (const auto& s : cfg.inits) {
    if (dim > 0 && static_cast<Eigen::Index>(s.size()) != dim) {
      v.push_back("every inits entry must have " + std::to_string(dim) + " entries");
      break;
    }
  }
  if (cfg.sampler == "parallel-hmc" && cfg.inits.empty() && t.kind != "mixture")
    v.push_back("parallel-hmc needs inits unless the target is a mixture");

  if (cfg.sampler == "vhmc" && cfg.varfit_mixture_file.empty()) {
    if (cfg.varfit_n_starts < 1) v.push_back("varfit.n_starts must be at least 1");
    if (!(cfg.varfit_start_low <= cfg.varfit_start_high)) v.push_back("varfit.start_low must not exceed start_high");
    if (dim > 0 && cfg.varfit_per_mode_samples < static_cast<std::size_t>(dim) + 1)
      v.push_back("varfit.per_mode_samples must be at least dim + 1");
    if (!(cfg.varfit_envelope_safety >= 1.0)) v.push_back("varfit.envelope_safety must be at least 1");
    if (!(cfg.varfit_learning_rate > 0.0)) v.push_back("varfit.learning_rate must be positive");
    if (cfg.varfit_max_steps < 1) v.push_back("varfit.max_steps must be at least 1");
  }

  if (cfg.n_replicates == 0) v.push_back("n_replicates must be positive");
  if (cfg.workers < 1) v.push_back("workers must be at least 1");
  if (cfg.output_dir.empty()) v.push_back("output_dir must not be empty");
  if (cfg.rem_stride == 0) v.push_back("rem.stride must be positive");

  const std::size_t kept = cfg.n_samples > cfg.burn_in ? cfg.n_samples - cfg.burn_in : 0;
  std::set<std::string> metric_set;
  for (const std::string& m : cfg.metrics) {
    const auto& names = known_metrics();
    if (std::find(names.begin(), names.end(), m) == names.end()) {
      v.push_back("unknown metric '" + m + "'");
      continue;
    }
    if (!metric_set.insert(m).second) v.push_back("metric '" + m + "' listed twice");
    const bool analytic = t.kind == "mixture" || t.kind == "rotated-gaussian";
    if (m == "mmd" && !analytic) v.push_back("metric mmd needs a target with an exact sampler");
    if (m == "occupancy" && t.kind != "mixture") v.push_back("metric occupancy needs a mixture target");
    if ((m == "accuracy" || m == "auc") && t.kind != "blr") v.push_back("metric " + m + " needs a blr target");
    if (m == "rem") {
      if (!analytic) {
        v.push_back("metric rem needs a target with a known mean");
      } else if (target_ok) {
        Vector mean = Vector::Zero(2);
        if (t.kind == "mixture") mean = GaussianMixture(mixture_spec(t)).mean();
        if (mean.lpNorm<1>() == 0.0) v.push_back("metric rem needs a nonzero true mean (target mean is zero)");
      }
    }
    if (m == "autocorrelation" && kept < cfg.acf_max_lag + 2)
      v.push_back("autocorrelation.max_lag too large for the kept sample count");
    if (m == "autocorrelation" && cfg.acf_report_lag > cfg.acf_max_lag)
      v.push_back("autocorrelation.report_lag exceeds autocorrelation.max_lag");
    if (m == "ess" && kept < 4) v.push_back("metric ess needs at least 4 kept samples");
  }
  for (std::size_t c : cfg.mmd_checkpoints) {
    if (c == 0 || c > kept) {
      v.push_back("mmd.checkpoints must lie in [1, n_samples - burn_in]");
      break;
    }
  }
  return v;
}

void validate_config(const ExperimentConfig& cfg) {
  const auto v = config_violations(cfg);
  if (v.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& s : v) msg += "\n  " + s;
  throw ConfigError(msg);
}

GaussianMixtureSpec mixture_spec(const TargetConfig& target) {
  GaussianMixtureSpec spec;
  spec.weights = target.weights;
  for (const Array1& m : target.means) spec.means.push_back(to_vector(m));
  for (const Array2& c : target.covariances) {
    Matrix cov(static_cast<Eigen::Index>(c.size()), c.empty() ? 0 : static_cast<Eigen::Index>(c.front().size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (static_cast<Eigen::Index>(c[i].size()) != cov.cols())
        throw ConfigError("covariance rows must all have the same length");
      for (std::size_t j = 0; j < c[i].size(); ++j)
        cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c[i][j];
    }
    spec.covariances.push_back(std::move(cov));
  }
  return spec;
}

SamplerConfig sampler_config(const ExperimentConfig& cfg, Eigen::Index dim) {
  SamplerConfig s;
  s.dynamics.step_size = cfg.step_size;
  s.dynamics.leapfrog_steps = cfg.leapfrog_steps;
  s.dynamics.mass = cfg.mass.size() == 1 ? uniform_mass(dim, cfg.mass.front()) : to_vector(cfg.mass);
  s.dynamics.friction = cfg.friction;
  s.dynamics.inverse_temperature = cfg.inverse_temperature;
  s.leapfrog_jitter = cfg.leapfrog_jitter;
  s.n_samples = cfg.n_samples;
  s.burn_in = cfg.burn_in;
  s.beta_mix = cfg.beta_mix;
  s.et.sigma = cfg.et_sigma;
  s.et.iterations = cfg.et_iterations;
  s.et.tolerance = cfg.et_tolerance;
  s.rejection_estimate_draws = cfg.rejection_estimate_draws;
  s.rejection_trial_cap = cfg.rejection_trial_cap;
  return s;
}

BuildConfig build_config(const ExperimentConfig& cfg, Eigen::Index dim) {
  BuildConfig b;
  b.search = default_mode_search(dim, cfg.varfit_start_low, cfg.varfit_start_high);
  b.search.n_starts = cfg.varfit_n_starts;
  b.search.merge_tol = cfg.varfit_merge_tol;
  b.search.adam.learning_rate = cfg.varfit_learning_rate;
  b.search.adam.max_steps = cfg.varfit_max_steps;
  b.search.adam.grad_tol = cfg.varfit_grad_tol;
  b.per_mode_samples = cfg.varfit_per_mode_samples;
  b.per_mode_burn_in = cfg.varfit_per_mode_burn_in;
  b.sampler = sampler_config(cfg, dim);
  b.envelope_safety = cfg.varfit_envelope_safety;
  return b;
}

std::string resolve_path(const ExperimentConfig& cfg, const std::string& path) {
  namespace fs = std::filesystem;
  if (path.empty() || fs::path(path).is_absolute() || fs::exists(path) || cfg.base_dir.path.empty()) return path;
  const fs::path candidate = fs::path(cfg.base_dir.path) / path;
  if (fs::exists(candidate)) return candidate.string();
  // Configs in a subdirectory commonly refer to paths relative to the project root.
  const fs::path parent_candidate = fs::path(cfg.base_dir.path).parent_path() / path;
  return fs::exists(parent_candidate) ? parent_candidate.string() : path;
}

std::string mixture_to_text(const VariationalMixture& q) {
  const GaussianMixtureSpec& spec = q.mixture.spec();
  json weights = spec.weights;
  json means = json::array();
  json covs = json::array();
  for (const Vector& m : spec.means) means.push_back(std::vector<double>(m.begin(), m.end()));
  for (const Matrix& c : spec.covariances) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      Array1 row(static_cast<std::size_t>(c.cols()));
      for (Eigen::Index j = 0; j < c.cols(); ++j) row[static_cast<std::size_t>(j)] = c(i, j);
      rows.push_back(row);
    }
    covs.push_back(rows);
  }
  return "variational.weights = " + array_text(weights) + "\nvariational.means = " + array_text(means) +
         "\nvariational.covariances = " + array_text(covs) + "\nvariational.log_envelope = " +
         shortest(q.log_envelope) + "\n";
}

VariationalMixture parse_mixture(const std::string& text) {
  std::vector<std::string> problems;
  const auto entries = tokenize(text, problems);
  TargetConfig t;
  std::optional<double> log_envelope;
  for (const Entry& e : entries) {
    try {
      if (e.key == "variational.weights") t.weights = as_array<Array1>(e.value);
      else if (e.key == "variational.means") t.means = as_array<Array2>(e.value);
      else if (e.key == "variational.covariances") t.covariances = as_array<Array3>(e.value);
      else if (e.key == "variational.log_envelope") log_envelope = as_double(e.value);
      else problems.push_back("line " + std::to_string(e.line) + ": unknown key '" + e.key + "'");
    } catch (const ConfigError& err) {
      problems.push_back("line " + std::to_string(e.line) + ": " + err.what());
    }
  }
  if (!log_envelope) problems.push_back("variational.log_envelope missing");
  if (!problems.empty()) {
    std::string msg = "invalid mixture file:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return VariationalMixture{GaussianMixture(mixture_spec(t)), *log_envelope};
}

VariationalMixture load_mixture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("mixture file not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mixture(ss.str());
}

}  // namespace vhmc
