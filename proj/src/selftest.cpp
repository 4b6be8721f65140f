#include "vhmc/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "vhmc/diagnostics.hpp"
#include "vhmc/dynamics.hpp"
#include "vhmc/kernels.hpp"
#include "vhmc/samplers.hpp"
#include "vhmc/targets.hpp"

namespace vhmc {
namespace {

Target two_mode_target() {
  GaussianMixtureSpec spec;
  spec.weights = {0.5, 0.5};
  spec.means = {Vector::Constant(2, 2.5), Vector::Constant(2, -2.5)};
  spec.means[0][1] = -2.5;
  spec.means[1][1] = 2.5;
  spec.covariances = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  return make_gaussian_mixture(spec);
}

double max_gradient_error(const Target& t, Rng& rng, int points) {
  double worst = 0.0;
  const double h = 1e-5;
  for (int k = 0; k < points; ++k) {
    const Vector x = standard_normal_vector(rng, t.dim());
    const Vector g = t.gradient(x);
    for (Eigen::Index i = 0; i < t.dim(); ++i) {
      Vector xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (t.potential(xp) - t.potential(xm)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
    }
  }
  return worst;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

}  // namespace

std::vector<SelftestCase> run_selftest() {
  std::vector<SelftestCase> cases;
  auto check = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    try {
      auto [ok, detail] = body();
      cases.push_back({name, ok, detail});
    } catch (const std::exception& e) {
      cases.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };

  check("leapfrog reversibility", [] {
    const Target t = two_mode_target();
    DynamicsParams params;
    params.mass = uniform_mass(2, 1.0);
    params.leapfrog_steps = 50;
    Rng rng(1);
    PhasePoint s{standard_normal_vector(rng, 2), standard_normal_vector(rng, 2)};
    PhasePoint f = leapfrog(t, s, params);
    f.p = -f.p;
    PhasePoint b = leapfrog(t, f, params);
    const double err = std::max((b.theta - s.theta).lpNorm<Eigen::Infinity>(), (b.p + s.p).lpNorm<Eigen::Infinity>());
    return std::pair{err < 1e-10, "max error " + num(err)};
  });

  check("gradients match finite differences", [] {
    Rng rng(2);
    double worst = max_gradient_error(two_mode_target(), rng, 20);
    worst = std::max(worst, max_gradient_error(make_rotated_gaussian({100.0, 0.01}, 0.7853981633974483), rng, 20));
    BlrModel model;
    model.features = RowMatrix::Random(40, 3);
    model.labels = (Vector::Random(40).array() > 0.0).cast<double>();
    model.intercept = true;
    worst = std::max(worst, max_gradient_error(make_blr_target(model), rng, 20));
    return std::pair{worst < 1e-5, "max relative error " + num(worst)};
  });

  check("langevin with zero friction equals plain leapfrog", [] {
    const Target t = two_mode_target();
    DynamicsParams params;
    params.mass = uniform_mass(2, 1.0);
    params.friction = 0.0;
    params.leapfrog_steps = 10;
    Rng rng(3);
    const PhasePoint s{standard_normal_vector(rng, 2), standard_normal_vector(rng, 2)};
    const DlhmcResult d = dlhmc(t, s, params, rng);
    DynamicsParams longer = params;
    longer.leapfrog_steps = 12;
    const PhasePoint l = leapfrog(t, s, longer);
    const double err = (d.state.theta - l.theta).lpNorm<Eigen::Infinity>();
    return std::pair{err < 1e-9 && d.ledger.delta_e == 0.0, "max error " + num(err)};
  });

  check("diagnostics oracles", [] {
    Matrix x(1, 2), y(1, 2);
    x << 1, 0;
    y << 0, 1;
    const double two_point = mmd2(x, y);
    Rng rng(4);
    Matrix z(500, 2);
    for (Eigen::Index r = 0; r < z.rows(); ++r) z.row(r) = standard_normal_vector(rng, 2).transpose();
    const double self = mmd2(z, z);
    const double rho0 = autocorrelation(z, 5).values[0];
    Matrix origin = Matrix::Zero(1, 2);
    Vector mu = Vector::Constant(2, -0.4);
    const double rem = rem_series(origin, mu).values[0];
    const bool ok = std::abs(two_point - 6.0) < 1e-12 && std::abs(self) < 1e-12 && rho0 == 1.0 &&
                    std::abs(rem - 1.0) < 1e-12;
    return std::pair{ok, "mmd2 two-point " + num(two_point) + ", rem " + num(rem)};
  });

  check("parallel kernels match serial reference", [] {
    Rng rng(5);
    RowMatrix design = RowMatrix::Random(1000, 4);
    Vector labels = (Vector::Random(1000).array() > 0.0).cast<double>();
    Vector w = standard_normal_vector(rng, 4);
    const double a = kernels::serial::logistic_nll(design, labels, w);
    const double b = kernels::parallel::logistic_nll(design, labels, w);
    const double g = (kernels::serial::logistic_nll_gradient(design, labels, w) -
                      kernels::parallel::logistic_nll_gradient(design, labels, w))
                         .lpNorm<Eigen::Infinity>();
    const double rel = std::abs(a - b) / std::abs(a);
    return std::pair{rel < 1e-12 && g < 1e-9, "likelihood relative gap " + num(rel)};
  });

  check("seeded chains are reproducible", [] {
    const Target t = two_mode_target();
    SamplerConfig cfg;
    cfg.dynamics.mass = uniform_mass(2, 1.0);
    cfg.dynamics.leapfrog_steps = 20;
    cfg.leapfrog_jitter = 5;
    cfg.n_samples = 200;
    const Chain a = lhmc_chain(t, Vector::Zero(2), cfg, 11);
    const Chain b = lhmc_chain(t, Vector::Zero(2), cfg, 11);
    return std::pair{a.samples == b.samples, "acceptance " + num(a.acceptance_rate)};
  });

  return cases;
}

}  // namespace vhmc
