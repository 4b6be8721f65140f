#include "vhmc/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vhmc/errors.hpp"
#include "vhmc/varfit.hpp"

namespace vhmc {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::dynamics: return "dynamics";
    case Provenance::variational: return "variational";
    case Provenance::repeat: return "repeat";
  }
  return "unknown";
}

std::size_t Chain::divergence_count() const {
  return static_cast<std::size_t>(std::count(divergent.begin(), divergent.end(), true));
}

void SamplerConfig::validate(Eigen::Index dim) const {
  dynamics.validate(dim);
  if (leapfrog_jitter < 0 || leapfrog_jitter >= dynamics.leapfrog_steps)
    throw ConfigError("leapfrog jitter must lie in [0, leapfrog_steps)");
  if (!(beta_mix >= 0.0 && beta_mix <= 1.0)) throw ConfigError("beta_mix must lie in [0, 1]");
  if (rejection_estimate_draws < 1) throw ConfigError("rejection_estimate_draws must be at least 1");
  if (burn_in > n_samples) throw ConfigError("burn_in exceeds n_samples");
}

DynamicsParams iteration_params(const SamplerConfig& config, Rng& rng) {
  DynamicsParams params = config.dynamics;
  if (config.leapfrog_jitter > 0) {
    std::uniform_int_distribution<int> steps(params.leapfrog_steps - config.leapfrog_jitter,
                                             params.leapfrog_steps + config.leapfrog_jitter);
    params.leapfrog_steps = steps(rng);
  }
  return params;
}

double acceptance_probability(double h_old, double h_new, double delta_e) {
  const double log_ratio = h_old - (h_new - delta_e);
  if (std::isnan(log_ratio)) return 0.0;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

namespace {

struct Proposal {
  Vector theta;
  double accept_prob = 0.0;
  bool divergent = false;
};

Vector draw_momentum(const DynamicsParams& params, Rng& rng) {
  const Vector scale = (params.mass / params.inverse_temperature).cwiseSqrt();
  return scale.cwiseProduct(standard_normal_vector(rng, params.mass.size()));
}

bool energy_escaped(double u) { return !std::isfinite(u) || std::abs(u) > kDivergenceBound; }

// One trajectory from (theta, fresh p). `u_old` is the potential the MH test compares against,
// which differs from U(theta) when an equipotential jump moved the start point.
template <class Integrate>
Proposal propose(const Target& target, const Vector& theta, double u_old, const DynamicsParams& params,
                 Rng& rng, Integrate integrate) {
  PhasePoint start{theta, draw_momentum(params, rng)};
  const double h_old = u_old + kinetic_energy(start.p, params.mass);
  Proposal out;
  try {
    auto [end, delta_e] = integrate(start);
    const double u_new = target.potential(end.theta);
    if (energy_escaped(u_new)) throw DivergenceError("potential", params.leapfrog_steps);
    out.accept_prob = acceptance_probability(h_old, u_new + kinetic_energy(end.p, params.mass), delta_e);
    out.theta = std::move(end.theta);
  } catch (const DivergenceError&) {
    out.divergent = true;
    out.accept_prob = 0.0;
  }
  return out;
}

Proposal hmc_propose(const Target& target, const Vector& theta, double u_old, const DynamicsParams& params,
                     Rng& rng) {
  return propose(target, theta, u_old, params, rng, [&](const PhasePoint& s) {
    return std::pair{leapfrog(target, s, params), 0.0};
  });
}

Proposal lhmc_propose(const Target& target, const Vector& theta, double u_old, const DynamicsParams& params,
                      Rng& rng) {
  return propose(target, theta, u_old, params, rng, [&](const PhasePoint& s) {
    DlhmcResult r = dlhmc(target, s, params, rng);
    return std::pair{std::move(r.state), r.ledger.delta_e};
  });
}

// Accumulates chain rows and per-step metadata.
class ChainBuilder {
 public:
  ChainBuilder(const Vector& init, std::size_t n, std::uint64_t seed) : current_(init) {
    chain_.samples.resize(static_cast<Eigen::Index>(n), init.size());
    chain_.accepted.reserve(n);
    chain_.provenance.reserve(n);
    chain_.divergent.reserve(n);
    chain_.transform_gap.reserve(n);
    chain_.seed = seed;
  }

  const Vector& current() const { return current_; }

  void push(Vector next, Provenance prov, bool divergent = false,
            double gap = std::numeric_limits<double>::quiet_NaN()) {
    current_ = std::move(next);
    record(prov, divergent, gap);
  }

  void repeat(bool divergent = false, double gap = std::numeric_limits<double>::quiet_NaN()) {
    record(Provenance::repeat, divergent, gap);
  }

  Chain& chain() { return chain_; }

  Chain finish() {
    const auto n = chain_.accepted.size();
    const auto hits = std::count(chain_.accepted.begin(), chain_.accepted.end(), true);
    chain_.acceptance_rate = n == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(n);
    return std::move(chain_);
  }

 private:
  void record(Provenance prov, bool divergent, double gap) {
    chain_.samples.row(static_cast<Eigen::Index>(chain_.accepted.size())) = current_.transpose();
    chain_.accepted.push_back(prov != Provenance::repeat);
    chain_.provenance.push_back(prov);
    chain_.divergent.push_back(divergent);
    chain_.transform_gap.push_back(gap);
  }

  Vector current_;
  Chain chain_;
};

void check_init(const Target& target, const Vector& init, const SamplerConfig& config) {
  if (init.size() != target.dim()) throw ConfigError("initial point dimension does not match the target");
  if (!init.allFinite()) throw ConfigError("initial point must be finite");
  config.validate(target.dim());
}

template <class Propose>
Chain mh_chain(const Target& target, const Vector& init, const SamplerConfig& config, std::uint64_t seed,
               Propose propose_fn) {
  check_init(target, init, config);
  Rng rng(seed);
  ChainBuilder builder(init, config.n_samples, seed);
  double u_current = target.potential(init);
  for (std::size_t n = 0; n < config.n_samples; ++n) {
    const DynamicsParams params = iteration_params(config, rng);
    Proposal prop = propose_fn(target, builder.current(), u_current, params, rng);
    const double u = uniform01(rng);
    if (!prop.divergent && u < prop.accept_prob) {
      u_current = target.potential(prop.theta);
      builder.push(std::move(prop.theta), Provenance::dynamics);
    } else {
      builder.repeat(prop.divergent);
    }
  }
  return builder.finish();
}

}  // namespace

Chain hmc_chain(const Target& target, const Vector& init, const SamplerConfig& config, std::uint64_t seed) {
  return mh_chain(target, init, config, seed, hmc_propose);
}

Chain lhmc_chain(const Target& target, const Vector& init, const SamplerConfig& config, std::uint64_t seed) {
  return mh_chain(target, init, config, seed, lhmc_propose);
}

Chain lhmc_et_chain(const Target& target, const Vector& init, const SamplerConfig& config,
                    std::uint64_t seed) {
  check_init(target, init, config);
  Rng rng(seed);
  ChainBuilder builder(init, config.n_samples, seed);
  double u_current = target.potential(init);
  for (std::size_t n = 0; n < config.n_samples; ++n) {
    const DynamicsParams params = iteration_params(config, rng);
    const bool transform_first = uniform01(rng) < 0.5;
    double gap = std::numeric_limits<double>::quiet_NaN();
    Proposal prop;
    if (transform_first) {
      Vector start = builder.current();
      if (auto moved = equipotential_transform(target, start, config.et, rng)) {
        gap = std::abs(target.potential(*moved) - u_current);
        start = std::move(*moved);
      }
      prop = lhmc_propose(target, start, u_current, params, rng);
    } else {
      prop = lhmc_propose(target, builder.current(), u_current, params, rng);
      if (!prop.divergent) {
        if (auto moved = equipotential_transform(target, prop.theta, config.et, rng)) {
          gap = std::abs(target.potential(*moved) - target.potential(prop.theta));
          prop.theta = std::move(*moved);
        }
      }
    }
    const double u = uniform01(rng);
    if (!prop.divergent && u < prop.accept_prob) {
      u_current = target.potential(prop.theta);
      builder.push(std::move(prop.theta), Provenance::dynamics, false, gap);
    } else {
      builder.repeat(prop.divergent, gap);
    }
  }
  return builder.finish();
}

double estimate_rejection_prob(const Target& target, const Vector& theta, const SamplerConfig& config,
                               Rng& rng) {
  const double u0 = target.potential(theta);
  double total = 0.0;
  for (int k = 0; k < config.rejection_estimate_draws; ++k) {
    const DynamicsParams params = iteration_params(config, rng);
    const Proposal prop = lhmc_propose(target, theta, u0, params, rng);
    total += prop.divergent ? 1.0 : 1.0 - prop.accept_prob;
  }
  return total / static_cast<double>(config.rejection_estimate_draws);
}

Chain vhmc_chain(const Target& target, const Vector& init, const VariationalMixture& qmix,
                 const SamplerConfig& config, std::uint64_t seed) {
  check_init(target, init, config);
  if (qmix.mixture.dim() != target.dim())
    throw ConfigError("variational mixture dimension does not match the target");
  Rng rng(seed);
  ChainBuilder builder(init, config.n_samples, seed);
  builder.chain().rejection_estimate_draws = config.rejection_estimate_draws;
  double u_current = target.potential(init);
  for (std::size_t n = 0; n < config.n_samples; ++n) {
    if (uniform01(rng) < config.beta_mix) {
      ++builder.chain().variational_branch_count;
      Vector draw = rejection_sample(qmix, target, rng, config.rejection_trial_cap);
      u_current = target.potential(draw);
      builder.push(std::move(draw), Provenance::variational);
      continue;
    }
    const DynamicsParams params = iteration_params(config, rng);
    Proposal prop = lhmc_propose(target, builder.current(), u_current, params, rng);
    if (!prop.divergent && uniform01(rng) < prop.accept_prob) {
      u_current = target.potential(prop.theta);
      builder.push(std::move(prop.theta), Provenance::dynamics);
      continue;
    }
    // Rejected: offer a guide point from q, corrected by the second MH test.
    Vector guide = rejection_sample(qmix, target, rng, config.rejection_trial_cap);
    const double r_guide = estimate_rejection_prob(target, guide, config, rng);
    const double ratio = (1.0 - r_guide) / (1.0 - prop.accept_prob);
    if (uniform01(rng) < std::min(1.0, ratio)) {
      u_current = target.potential(guide);
      builder.push(std::move(guide), Provenance::variational, prop.divergent);
    } else {
      builder.repeat(prop.divergent);
    }
  }
  return builder.finish();
}

Chain parallel_hmc(const Target& target, const std::vector<Vector>& inits, const SamplerConfig& config,
                   std::uint64_t seed) {
  if (inits.empty()) throw ConfigError("parallel HMC needs at least one initial point");
  const std::size_t k = inits.size();
  std::vector<Chain> parts(k);
  std::vector<std::string> failures(k);
  const auto count = static_cast<long>(k);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < count; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    SamplerConfig local = config;
    local.n_samples = config.n_samples / k + (idx < config.n_samples % k ? 1 : 0);
    const std::size_t burn = config.burn_in / k + (idx < config.burn_in % k ? 1 : 0);
    local.burn_in = std::min(burn, local.n_samples);
    try {
      parts[idx] = drop_prefix(hmc_chain(target, inits[idx], local, seed + idx), local.burn_in);
    } catch (const std::exception& e) {
      failures[idx] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw Error(f);
  }
  Chain out;
  out.seed = seed;
  Eigen::Index total = 0;
  for (const Chain& part : parts) total += part.size();
  out.samples.resize(total, target.dim());
  Eigen::Index row = 0;
  for (Chain& part : parts) {
    out.samples.middleRows(row, part.size()) = part.samples;
    row += part.size();
    out.accepted.insert(out.accepted.end(), part.accepted.begin(), part.accepted.end());
    out.provenance.insert(out.provenance.end(), part.provenance.begin(), part.provenance.end());
    out.divergent.insert(out.divergent.end(), part.divergent.begin(), part.divergent.end());
    out.transform_gap.insert(out.transform_gap.end(), part.transform_gap.begin(), part.transform_gap.end());
  }
  const auto hits = std::count(out.accepted.begin(), out.accepted.end(), true);
  out.acceptance_rate = out.accepted.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(out.accepted.size());
  return out;
}

Chain drop_prefix(const Chain& chain, std::size_t count) {
  const auto n = static_cast<std::size_t>(chain.size());
  count = std::min(count, n);
  const auto first = static_cast<std::ptrdiff_t>(count);
  Chain out;
  out.samples = chain.samples.bottomRows(static_cast<Eigen::Index>(n - count));
  out.accepted.assign(chain.accepted.begin() + first, chain.accepted.end());
  out.provenance.assign(chain.provenance.begin() + first, chain.provenance.end());
  out.divergent.assign(chain.divergent.begin() + first, chain.divergent.end());
  out.transform_gap.assign(chain.transform_gap.begin() + first, chain.transform_gap.end());
  const auto hits = std::count(out.accepted.begin(), out.accepted.end(), true);
  out.acceptance_rate = out.accepted.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(out.accepted.size());
  out.seed = chain.seed;
  out.variational_branch_count = chain.variational_branch_count;
  out.rejection_estimate_draws = chain.rejection_estimate_draws;
  return out;
}

}  // namespace vhmc
