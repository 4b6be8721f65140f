#include "vhmc/varfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "vhmc/errors.hpp"

namespace vhmc {

AdamResult adam_minimize(const Target& target, const Vector& theta0, const AdamConfig& cfg) {
  if (!theta0.allFinite()) throw Error("Adam start point is not finite");
  Vector theta = theta0;
  Vector m = Vector::Zero(theta.size());
  Vector v = Vector::Zero(theta.size());
  double b1_power = 1.0;
  double b2_power = 1.0;
  int step = 0;
  for (; step < cfg.max_steps; ++step) {
    const Vector g = target.gradient(theta);
    if (!g.allFinite()) throw Error("non-finite gradient during Adam at step " + std::to_string(step));
    if (g.lpNorm<Eigen::Infinity>() < cfg.grad_tol) break;
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseAbs2();
    b1_power *= cfg.beta1;
    b2_power *= cfg.beta2;
    const Vector m_hat = m / (1.0 - b1_power);
    const Vector v_hat = v / (1.0 - b2_power);
    theta.array() -= cfg.learning_rate * m_hat.array() / (v_hat.array().sqrt() + cfg.epsilon);
  }
  const double u = target.potential(theta);
  if (!std::isfinite(u) || !theta.allFinite())
    throw Error("non-finite potential at the Adam iterate");
  return {std::move(theta), u, step};
}

ModeSearch default_mode_search(Eigen::Index dim, double lo, double hi) {
  ModeSearch search;
  search.low = Vector::Constant(dim, lo);
  search.high = Vector::Constant(dim, hi);
  return search;
}

std::vector<Mode> find_modes_from_starts(const Target& target, const std::vector<Vector>& starts,
                                         const AdamConfig& adam, double merge_tol) {
  if (starts.empty()) throw Error("mode search needs at least one start");
  const auto n = static_cast<long>(starts.size());
  std::vector<std::optional<Mode>> results(starts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      AdamResult r = adam_minimize(target, starts[static_cast<std::size_t>(i)], adam);
      results[static_cast<std::size_t>(i)] = Mode{std::move(r.theta), r.potential};
    } catch (const Error&) {
      // a diverging start contributes nothing
    }
  }
  std::vector<Mode> found;
  for (auto& r : results) {
    if (r) found.push_back(std::move(*r));
  }
  if (found.empty()) throw Error("every mode-search start diverged");

  // Whitening scale: per-dimension std of the starts.
  const Eigen::Index dim = starts.front().size();
  Vector mean = Vector::Zero(dim);
  for (const Vector& s : starts) mean += s;
  mean /= static_cast<double>(starts.size());
  Vector scale = Vector::Zero(dim);
  for (const Vector& s : starts) scale += (s - mean).cwiseAbs2();
  scale = (scale / static_cast<double>(starts.size())).cwiseSqrt();
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (!(scale[j] > 0.0)) scale[j] = 1.0;
  }

  std::sort(found.begin(), found.end(), [](const Mode& a, const Mode& b) {
    if (a.potential != b.potential) return a.potential < b.potential;
    return std::lexicographical_compare(a.center.begin(), a.center.end(), b.center.begin(), b.center.end());
  });
  std::vector<Mode> kept;
  for (Mode& m : found) {
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Mode& k) {
      return (m.center - k.center).cwiseQuotient(scale).norm() < merge_tol;
    });
    if (!duplicate) kept.push_back(std::move(m));
  }
  return kept;
}

std::vector<Mode> find_modes(const Target& target, const ModeSearch& search, Rng& rng) {
  if (search.n_starts < 1) throw ConfigError("mode search needs n_starts >= 1");
  if (search.low.size() != target.dim() || search.high.size() != target.dim())
    throw ConfigError("start box dimension does not match the target");
  if (!search.low.allFinite() || !search.high.allFinite() || (search.high.array() < search.low.array()).any())
    throw ConfigError("start box must be finite with low <= high");
  std::vector<Vector> starts;
  starts.reserve(static_cast<std::size_t>(search.n_starts));
  for (int i = 0; i < search.n_starts; ++i) {
    Vector s(target.dim());
    for (Eigen::Index j = 0; j < s.size(); ++j)
      s[j] = search.low[j] + (search.high[j] - search.low[j]) * uniform01(rng);
    starts.push_back(std::move(s));
  }
  return find_modes_from_starts(target, starts, search.adam, search.merge_tol);
}

GaussianFit fit_mode_gaussian(const Matrix& samples) {
  const Eigen::Index m = samples.rows();
  const Eigen::Index dim = samples.cols();
  if (m < dim + 1) throw Error("Gaussian fit needs at least dim + 1 samples");
  GaussianFit fit;
  fit.mean = samples.colwise().mean().transpose();
  const Matrix centered = samples.rowwise() - fit.mean.transpose();
  fit.covariance = (centered.transpose() * centered) / static_cast<double>(m);
  fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose());
  fit.covariance.diagonal().array() += kFitRidge;
  return fit;
}

double average_log_likelihood(const Matrix& samples, const Vector& mean, const Matrix& covariance) {
  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const Matrix lower = llt.matrixL();
  const double log_det = 2.0 * lower.diagonal().array().log().sum();
  const Matrix centered = (samples.rowwise() - mean.transpose()).transpose();
  const Matrix whitened = lower.triangularView<Eigen::Lower>().solve(centered);
  const double quad = whitened.colwise().squaredNorm().mean();
  const auto dim = static_cast<double>(samples.cols());
  return -0.5 * (quad + log_det + dim * std::log(2.0 * std::numbers::pi));
}

double VariationalMixture::log_acceptance(const Target& target, const Vector& theta) const {
  return -target.potential(theta) - log_envelope - mixture.log_density(theta);
}

std::vector<double> laplace_weights(const Target& target, const std::vector<GaussianFit>& fits) {
  Vector log_w(static_cast<Eigen::Index>(fits.size()));
  for (std::size_t i = 0; i < fits.size(); ++i) {
    Eigen::LLT<Matrix> llt(fits[i].covariance);
    const double half_log_det = Matrix(llt.matrixL()).diagonal().array().log().sum();
    log_w[static_cast<Eigen::Index>(i)] = -target.potential(fits[i].mean) + half_log_det;
  }
  const double total = log_sum_exp(log_w);
  std::vector<double> w(fits.size());
  for (std::size_t i = 0; i < fits.size(); ++i) w[i] = std::exp(log_w[static_cast<Eigen::Index>(i)] - total);
  return w;
}

VariationalBuild build_variational_detailed(const Target& target, const BuildConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  VariationalBuild out{VariationalMixture{GaussianMixture({{1.0}, {Vector::Zero(target.dim())},
                                                           {Matrix::Identity(target.dim(), target.dim())}}),
                                          0.0},
                       find_modes(target, cfg.search, rng),
                       {}};
  const auto k = out.modes.size();
  out.mode_samples.resize(k);
  std::vector<GaussianFit> fits(k);
  std::vector<std::string> failures(k);
  const auto count = static_cast<long>(k);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    SamplerConfig local = cfg.sampler;
    local.n_samples = cfg.per_mode_samples + cfg.per_mode_burn_in;
    local.burn_in = cfg.per_mode_burn_in;
    try {
      Chain chain = lhmc_chain(target, out.modes[idx].center, local, seed + 1 + idx);
      out.mode_samples[idx] = chain.samples.bottomRows(static_cast<Eigen::Index>(cfg.per_mode_samples));
      fits[idx] = fit_mode_gaussian(out.mode_samples[idx]);
    } catch (const std::exception& e) {
      failures[idx] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw Error("variational fit failed: " + f);
  }

  GaussianMixtureSpec spec;
  spec.weights = laplace_weights(target, fits);
  for (GaussianFit& f : fits) {
    spec.means.push_back(std::move(f.mean));
    spec.covariances.push_back(std::move(f.covariance));
  }
  out.q.mixture = GaussianMixture(spec);

  double worst = -std::numeric_limits<double>::infinity();
  for (const Matrix& s : out.mode_samples) {
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
      const Vector theta = s.row(r).transpose();
      worst = std::max(worst, -target.potential(theta) - out.q.mixture.log_density(theta));
    }
  }
  out.q.log_envelope = std::log(cfg.envelope_safety) + worst;
  return out;
}

VariationalMixture build_variational(const Target& target, const BuildConfig& cfg, std::uint64_t seed) {
  return build_variational_detailed(target, cfg, seed).q;
}

RejectionDraw rejection_sample_counted(const VariationalMixture& qmix, const Target& target, Rng& rng,
                                       long trial_cap) {
  for (long trial = 1; trial <= trial_cap; ++trial) {
    Vector theta = qmix.mixture.sample(rng);
    const double log_u = std::log(uniform01(rng));
    if (log_u <= qmix.log_acceptance(target, theta)) return {std::move(theta), trial};
  }
  throw EnvelopeError(trial_cap);
}

Vector rejection_sample(const VariationalMixture& qmix, const Target& target, Rng& rng, long trial_cap) {
  return rejection_sample_counted(qmix, target, rng, trial_cap).theta;
}

}  // namespace vhmc
