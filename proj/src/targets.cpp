#include "vhmc/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vhmc/errors.hpp"
#include "vhmc/kernels.hpp"

namespace vhmc {

Target::Target(std::string name, Eigen::Index dim, PotentialFn potential, GradientFn gradient)
    : name_(std::move(name)), dim_(dim), potential_(std::move(potential)), gradient_(std::move(gradient)) {
  if (dim_ <= 0) throw Error("target dimension must be positive");
}

Vector Target::draw_exact(Rng& rng) const {
  if (!exact_sampler_) throw Error("no exact sampler for target '" + name_ + "'");
  return exact_sampler_(rng);
}

Target& Target::with_exact_mean(Vector mean) {
  exact_mean_ = std::move(mean);
  return *this;
}

Target& Target::with_exact_sampler(SamplerFn sampler) {
  exact_sampler_ = std::move(sampler);
  return *this;
}

Target& Target::with_mode_centers(std::vector<Vector> centers) {
  mode_centers_ = std::move(centers);
  return *this;
}

double log_sum_exp(const Vector& terms) {
  const double top = terms.maxCoeff();
  if (!std::isfinite(top)) return top;
  return top + std::log((terms.array() - top).exp().sum());
}

void GaussianMixtureSpec::validate() const {
  if (weights.empty()) throw Error("mixture needs at least one component");
  if (means.size() != weights.size() || covariances.size() != weights.size())
    throw Error("mixture weights, means and covariances must have the same length");
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw Error("mixture weight " + std::to_string(i) + " is negative");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error("mixture weights must sum to 1");
  const Eigen::Index dim = means.front().size();
  if (dim == 0) throw Error("mixture component 0 has an empty mean");
  for (std::size_t i = 0; i < means.size(); ++i) {
    const Matrix& cov = covariances[i];
    if (means[i].size() != dim || cov.rows() != dim || cov.cols() != dim)
      throw Error("mixture component " + std::to_string(i) + " has mismatched dimensions");
    if (!cov.isApprox(cov.transpose(), 1e-12))
      throw Error("covariance of mixture component " + std::to_string(i) + " is not symmetric");
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success || (llt.matrixL().toDenseMatrix().diagonal().array() <= 0.0).any())
      throw Error("covariance of mixture component " + std::to_string(i) +
                  " is not positive definite");
  }
}

GaussianMixture::GaussianMixture(const GaussianMixtureSpec& spec) : spec_(spec) {
  spec_.validate();
  dim_ = spec_.means.front().size();
  double running = 0.0;
  for (std::size_t i = 0; i < spec_.weights.size(); ++i) {
    Eigen::LLT<Matrix> llt(spec_.covariances[i]);
    Matrix lower = llt.matrixL();
    const double log_det_half = lower.diagonal().array().log().sum();
    components_.push_back({std::log(spec_.weights[i]), spec_.means[i], std::move(lower),
                           -0.5 * static_cast<double>(dim_) * std::log(2.0 * std::numbers::pi) -
                               log_det_half});
    running += spec_.weights[i];
    cumulative_weights_.push_back(running);
  }
}

Vector GaussianMixture::component_log_terms(const Vector& x, std::vector<Vector>* whitened) const {
  Vector terms(static_cast<Eigen::Index>(components_.size()));
  if (whitened) whitened->resize(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Component& c = components_[i];
    Vector z = c.lower.triangularView<Eigen::Lower>().solve(x - c.mean);
    terms[static_cast<Eigen::Index>(i)] = c.log_weight + c.log_normalizer - 0.5 * z.squaredNorm();
    if (whitened) (*whitened)[i] = std::move(z);
  }
  return terms;
}

double GaussianMixture::log_density(const Vector& x) const {
  return log_sum_exp(component_log_terms(x, nullptr));
}

Vector GaussianMixture::log_density_gradient(const Vector& x) const {
  std::vector<Vector> whitened;
  const Vector terms = component_log_terms(x, &whitened);
  const double total = log_sum_exp(terms);
  Vector grad = Vector::Zero(dim_);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const double resp = std::exp(terms[static_cast<Eigen::Index>(i)] - total);
    if (resp == 0.0) continue;
    // Σ⁻¹(x − μ) = L⁻ᵀ z
    grad -= resp * components_[i].lower.transpose().triangularView<Eigen::Upper>().solve(whitened[i]);
  }
  return grad;
}

Vector GaussianMixture::sample(Rng& rng) const {
  const double u = uniform01(rng) * cumulative_weights_.back();
  auto it = std::upper_bound(cumulative_weights_.begin(), cumulative_weights_.end(), u);
  std::size_t k = static_cast<std::size_t>(std::distance(cumulative_weights_.begin(), it));
  k = std::min(k, components_.size() - 1);
  while (spec_.weights[k] == 0.0 && k > 0) --k;
  const Component& c = components_[k];
  return c.mean + c.lower * standard_normal_vector(rng, dim_);
}

Vector GaussianMixture::mean() const {
  Vector m = Vector::Zero(dim_);
  for (std::size_t i = 0; i < components_.size(); ++i) m += spec_.weights[i] * spec_.means[i];
  return m;
}

Target make_gaussian_mixture(const GaussianMixtureSpec& spec) {
  auto mixture = std::make_shared<const GaussianMixture>(spec);
  Target target(
      "gaussian-mixture", mixture->dim(),
      [mixture](const Vector& x) { return -mixture->log_density(x); },
      [mixture](const Vector& x) -> Vector { return -mixture->log_density_gradient(x); });
  target.with_exact_mean(mixture->mean())
      .with_exact_sampler([mixture](Rng& rng) { return mixture->sample(rng); })
      .with_mode_centers(spec.means);
  return target;
}

Matrix rotated_covariance(const std::array<double, 2>& variances, double angle) {
  if (!(variances[0] > 0.0) || !(variances[1] > 0.0))
    throw Error("rotated Gaussian variances must be positive");
  Matrix rotation(2, 2);
  rotation << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return rotation * Vector{{variances[0], variances[1]}}.asDiagonal() * rotation.transpose();
}

Target make_rotated_gaussian(const std::array<double, 2>& variances, double angle) {
  Matrix cov = rotated_covariance(variances, angle);
  cov = 0.5 * (cov + cov.transpose());
  Target target = make_gaussian_mixture({{1.0}, {Vector::Zero(2)}, {cov}});
  Target rotated("rotated-gaussian", 2,
                 [target](const Vector& x) { return target.potential(x); },
                 [target](const Vector& x) { return target.gradient(x); });
  rotated.with_exact_mean(Vector::Zero(2))
      .with_exact_sampler([target](Rng& rng) { return target.draw_exact(rng); })
      .with_mode_centers({Vector::Zero(2)});
  return rotated;
}

void BlrModel::validate() const {
  if (features.rows() == 0) throw DataError("logistic regression needs a nonempty dataset");
  if (labels.size() != features.rows()) throw DataError("label count does not match feature rows");
  for (Eigen::Index n = 0; n < labels.size(); ++n) {
    if (labels[n] != 0.0 && labels[n] != 1.0)
      throw DataError("label at row " + std::to_string(n) + " is outside {0,1}");
  }
  if (!(prior_variance > 0.0)) throw DataError("prior variance must be positive");
}

RowMatrix blr_design(const BlrModel& model) {
  if (!model.intercept) return model.features;
  RowMatrix design(model.features.rows(), model.features.cols() + 1);
  design.leftCols(model.features.cols()) = model.features;
  design.col(model.features.cols()).setOnes();
  return design;
}

Target make_blr_target(const BlrModel& model) {
  model.validate();
  struct Data {
    RowMatrix design;
    Vector labels;
    double inv_prior;
  };
  auto data = std::make_shared<const Data>(Data{blr_design(model), model.labels, 1.0 / model.prior_variance});
  return Target(
      "blr", data->design.cols(),
      [data](const Vector& w) {
        return kernels::parallel::logistic_nll(data->design, data->labels, w) +
               0.5 * data->inv_prior * w.squaredNorm();
      },
      [data](const Vector& w) -> Vector {
        return kernels::parallel::logistic_nll_gradient(data->design, data->labels, w) + data->inv_prior * w;
      });
}

Matrix exact_sample(const Target& target, Eigen::Index n, Rng& rng) {
  if (!target.has_exact_sampler()) throw Error("no exact sampler for target '" + target.name() + "'");
  Matrix out(n, target.dim());
  for (Eigen::Index i = 0; i < n; ++i) out.row(i) = target.draw_exact(rng).transpose();
  return out;
}

}  // namespace vhmc
