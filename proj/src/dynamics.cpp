#include "vhmc/dynamics.hpp"

#include <cmath>

#include "vhmc/errors.hpp"

namespace vhmc {
namespace {

bool escaped(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || std::abs(v[i]) > kDivergenceBound) return true;
  }
  return false;
}

void check_state(const PhasePoint& s, const char* stage, int step) {
  if (escaped(s.theta) || escaped(s.p)) throw DivergenceError(stage, step);
}

}  // namespace

double DynamicsParams::a1() const { return std::exp(-friction * step_size); }

double DynamicsParams::a2() const {
  const double a = a1();
  return std::sqrt(std::max(0.0, (1.0 - a * a) / inverse_temperature));
}

void DynamicsParams::validate(Eigen::Index dim) const {
  if (!(step_size > 0.0)) throw ConfigError("step size must be positive");
  if (leapfrog_steps < 1) throw ConfigError("leapfrog steps must be at least 1");
  if (mass.size() != dim) throw ConfigError("mass dimension does not match the target");
  if ((mass.array() <= 0.0).any()) throw ConfigError("mass entries must be positive");
  if (!(friction >= 0.0)) throw ConfigError("friction must be nonnegative");
  if (!(inverse_temperature > 0.0)) throw ConfigError("inverse temperature must be positive");
}

Vector uniform_mass(Eigen::Index dim, double m) { return Vector::Constant(dim, m); }

double kinetic_energy(const Vector& p, const Vector& mass) {
  return 0.5 * (p.array().square() / mass.array()).sum();
}

double hamiltonian(const Target& target, const PhasePoint& s, const Vector& mass) {
  return target.potential(s.theta) + kinetic_energy(s.p, mass);
}

PhasePoint leapfrog(const Target& target, PhasePoint s, const DynamicsParams& params) {
  const double eps = params.step_size;
  const Vector inv_mass = params.mass.cwiseInverse();
  // Adjacent half kicks of consecutive steps are fused into one full kick.
  s.p -= 0.5 * eps * target.gradient(s.theta);
  for (int step = 0; step < params.leapfrog_steps; ++step) {
    s.theta += eps * inv_mass.cwiseProduct(s.p);
    const double kick = step + 1 == params.leapfrog_steps ? 0.5 * eps : eps;
    s.p -= kick * target.gradient(s.theta);
    check_state(s, "leapfrog", step);
  }
  return s;
}

PhasePoint langevin_first_half(const Target& target, PhasePoint s, const DynamicsParams& params) {
  const double half = 0.5 * params.step_size;
  s.p -= half * target.gradient(s.theta);
  s.theta += half * s.p.cwiseQuotient(params.mass);
  check_state(s, "langevin first half", 0);
  return s;
}

PhasePoint langevin_second_half(const Target& target, PhasePoint s, const DynamicsParams& params) {
  const double half = 0.5 * params.step_size;
  s.theta += half * s.p.cwiseQuotient(params.mass);
  s.p -= half * target.gradient(s.theta);
  check_state(s, "langevin second half", 0);
  return s;
}

KickResult thermal_kick(const Vector& p, const DynamicsParams& params, const Vector& z) {
  Vector out = params.a1() * p + params.a2() * params.mass.cwiseSqrt().cwiseProduct(z);
  const double delta = kinetic_energy(out, params.mass) - kinetic_energy(p, params.mass);
  return {std::move(out), delta};
}

KickResult thermal_kick(const Vector& p, const DynamicsParams& params, Rng& rng) {
  if (params.a2() == 0.0) return thermal_kick(p, params, Vector::Zero(p.size()));
  return thermal_kick(p, params, standard_normal_vector(rng, p.size()));
}

DlhmcResult dlhmc(const Target& target, const PhasePoint& start, const DynamicsParams& params, Rng& rng) {
  EnergyLedger ledger;
  PhasePoint s = langevin_first_half(target, start, params);
  KickResult kick = thermal_kick(s.p, params, rng);
  s.p = std::move(kick.p);
  ledger.delta_e += kick.delta_e;
  s = langevin_second_half(target, std::move(s), params);

  s = leapfrog(target, std::move(s), params);

  s = langevin_first_half(target, std::move(s), params);
  kick = thermal_kick(s.p, params, rng);
  s.p = std::move(kick.p);
  ledger.delta_e += kick.delta_e;
  s = langevin_second_half(target, std::move(s), params);
  return {std::move(s), ledger};
}

std::optional<Vector> equipotential_from(const Target& target, const Vector& theta0, Vector x,
                                         const EquipotentialParams& params) {
  const double level = target.potential(theta0);
  double gap = target.potential(x) - level;
  for (int i = 0; i < params.iterations; ++i) {
    if (!std::isfinite(gap)) return std::nullopt;
    const Vector g = target.gradient(x);
    const double norm2 = g.squaredNorm();
    // Scalar Newton step on U(x) = U(θ0) taken along ∇U(x).
    if (!(norm2 > 1e-300) || !std::isfinite(norm2)) return std::nullopt;
    x -= (gap / norm2) * g;
    if (escaped(x)) return std::nullopt;
    gap = target.potential(x) - level;
  }
  if (std::isfinite(gap) && std::abs(gap) < params.tolerance) return x;
  return std::nullopt;
}

std::optional<Vector> equipotential_transform(const Target& target, const Vector& theta0,
                                              const EquipotentialParams& params, Rng& rng) {
  Vector x = theta0 + params.sigma * standard_normal_vector(rng, theta0.size());
  return equipotential_from(target, theta0, std::move(x), params);
}

}  // namespace vhmc
