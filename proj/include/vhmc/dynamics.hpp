#pragma once

#include <optional>
#include <string>

#include "vhmc/linalg.hpp"
#include "vhmc/targets.hpp"

namespace vhmc {

struct PhasePoint {
  Vector theta;
  Vector p;
};

/// Integrator settings. `mass` is the diagonal of M.
struct DynamicsParams {
  double step_size = 0.05;
  int leapfrog_steps = 40;
  Vector mass;
  double friction = 0.5;
  double inverse_temperature = 1.0;

  /// exp(−γε), the momentum retention of one thermal kick.
  double a1() const;
  /// sqrt(β⁻¹(1 − a1²)), the noise scale of one thermal kick.
  double a2() const;

  void validate(Eigen::Index dim) const;
};

/// Unit mass in `dim` dimensions, scaled by `m`.
Vector uniform_mass(Eigen::Index dim, double m = 1.0);

double kinetic_energy(const Vector& p, const Vector& mass);

/// U(θ) + K(p).
double hamiltonian(const Target& target, const PhasePoint& s, const Vector& mass);

/// Kinetic energy pumped in by thermal kicks; Q_t = Q_{t−1} − ΔE.
struct EnergyLedger {
  double delta_e = 0.0;
};

inline constexpr double kDivergenceBound = 1e10;

/// `leapfrog_steps` steps of the Störmer–Verlet scheme.
/// Throws DivergenceError with the failing step index.
PhasePoint leapfrog(const Target& target, PhasePoint s, const DynamicsParams& params);

/// p ← p − (ε/2)∇U(θ); θ ← θ + (ε/2)M⁻¹p.
PhasePoint langevin_first_half(const Target& target, PhasePoint s, const DynamicsParams& params);

/// θ ← θ + (ε/2)M⁻¹p; p ← p − (ε/2)∇U(θ).
PhasePoint langevin_second_half(const Target& target, PhasePoint s, const DynamicsParams& params);

struct KickResult {
  Vector p;
  double delta_e;
};

/// p′ = a1 p + a2 √M z with z supplied by the caller.
KickResult thermal_kick(const Vector& p, const DynamicsParams& params, const Vector& z);

/// p′ = a1 p + a2 √M z, z ~ N(0, I). No draws are taken when a2 = 0.
KickResult thermal_kick(const Vector& p, const DynamicsParams& params, Rng& rng);

struct DlhmcResult {
  PhasePoint state;
  EnergyLedger ledger;
};

/// Langevin half → kick → Langevin half → leapfrog → Langevin half → kick → Langevin half.
DlhmcResult dlhmc(const Target& target, const PhasePoint& s, const DynamicsParams& params, Rng& rng);

struct EquipotentialParams {
  double sigma = 1.0;   // spread of the initial draw around θ0
  int iterations = 10;  // Newton iterations
  double tolerance = 0.01;
};

/// Looks for θ′ with U(θ′) = U(θ0) by Newton iteration along the gradient,
/// starting from x ~ N(θ0, σ²I). Returns nullopt when no point within tolerance is reached.
std::optional<Vector> equipotential_transform(const Target& target, const Vector& theta0,
                                              const EquipotentialParams& params, Rng& rng);

/// Same iteration from a caller-chosen starting point.
std::optional<Vector> equipotential_from(const Target& target, const Vector& theta0, Vector x,
                                         const EquipotentialParams& params);

}  // namespace vhmc
