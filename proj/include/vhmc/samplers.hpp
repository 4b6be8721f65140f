#pragma once

#include <cstdint>
#include <vector>

#include "vhmc/dynamics.hpp"
#include "vhmc/linalg.hpp"
#include "vhmc/targets.hpp"

namespace vhmc {

struct VariationalMixture;

/// Where a chain's sample at one iteration came from.
enum class Provenance : std::uint8_t {
  dynamics,     // accepted dynamics proposal
  variational,  // draw from the variational mixture
  repeat,       // rejected, previous state repeated
};

const char* to_string(Provenance p);

struct Chain {
  Matrix samples;  // one row per iteration
  std::vector<bool> accepted;
  std::vector<Provenance> provenance;
  std::vector<bool> divergent;
  /// |U(θ′) − U(θ)| of an equipotential substitution made at that iteration, NaN if none.
  std::vector<double> transform_gap;
  double acceptance_rate = 0.0;
  std::uint64_t seed = 0;
  /// Iterations that took the β branch of VHMC.
  std::size_t variational_branch_count = 0;
  /// Draws used by each r(θ) estimate; r is itself a Monte Carlo estimate.
  int rejection_estimate_draws = 0;

  Eigen::Index size() const { return samples.rows(); }
  std::size_t divergence_count() const;
};

struct SamplerConfig {
  DynamicsParams dynamics;
  /// Leapfrog count is redrawn every iteration uniformly from [L − jitter, L + jitter].
  int leapfrog_jitter = 0;
  std::size_t n_samples = 1000;
  std::size_t burn_in = 0;
  /// Probability of the VHMC variational branch.
  double beta_mix = 0.1;
  EquipotentialParams et;
  int rejection_estimate_draws = 1;
  long rejection_trial_cap = 100000;

  void validate(Eigen::Index dim) const;
};

/// Dynamics parameters for one iteration, with the leapfrog count jittered.
DynamicsParams iteration_params(const SamplerConfig& config, Rng& rng);

/// min(1, exp(H_old − H_new + ΔE)); with ΔE = 0 this is the plain HMC rule.
double acceptance_probability(double h_old, double h_new, double delta_e);

Chain hmc_chain(const Target& target, const Vector& init, const SamplerConfig& config, std::uint64_t seed);
Chain lhmc_chain(const Target& target, const Vector& init, const SamplerConfig& config, std::uint64_t seed);

/// LHMC with equipotential jumps. Each iteration a fair coin applies the transform either
/// before or after the dynamics. Assumes a target symmetric about its center.
Chain lhmc_et_chain(const Target& target, const Vector& init, const SamplerConfig& config,
                    std::uint64_t seed);

/// Average over `rejection_estimate_draws` fresh momenta of the DLHMC rejection probability at θ.
double estimate_rejection_prob(const Target& target, const Vector& theta, const SamplerConfig& config,
                               Rng& rng);

Chain vhmc_chain(const Target& target, const Vector& init, const VariationalMixture& qmix,
                 const SamplerConfig& config, std::uint64_t seed);

/// One HMC chain per initial point (seeds seed + j), concatenated in order.
/// n_samples and burn_in are split evenly across the chains; each chain drops its own
/// burn-in, so the result holds only post-burn-in draws.
Chain parallel_hmc(const Target& target, const std::vector<Vector>& inits, const SamplerConfig& config,
                   std::uint64_t seed);

/// Drops the first `count` iterations.
Chain drop_prefix(const Chain& chain, std::size_t count);

}  // namespace vhmc
