#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vhmc/linalg.hpp"

namespace vhmc {

struct Dataset {
  std::string name;
  RowMatrix features;  // N×d
  Vector labels;       // 0/1
  std::vector<std::string> feature_names;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dim() const { return features.cols(); }
};

struct CsvLoadStats {
  std::size_t dropped_rows = 0;
};

/// Reads a comma-separated file with an optional header row.
///
/// `label_column` is a header name or a column index (negative counts from the end).
/// Cells equal to `positive_label` map to 1; the single other label value maps to 0.
/// Rows containing "?", blanks or unparseable numbers are dropped and counted.
Dataset load_csv(const std::string& path, const std::string& label_column, const std::string& positive_label,
                 CsvLoadStats* stats = nullptr);

/// Per-column (x − mean)/std with the population std. Constant columns are dropped.
Dataset normalize(const Dataset& ds, std::vector<std::string>* dropped_columns = nullptr);

struct DataSplit {
  Dataset train;
  Dataset test;
  std::vector<Eigen::Index> train_index;
  std::vector<Eigen::Index> test_index;
};

/// Stratified split; each class contributes round(test_fraction · n_class) rows to the test set.
DataSplit split(const Dataset& ds, double test_fraction, Rng& rng);

/// s_n = mean over posterior draws of σ(wᵀφ_n). With `intercept`, the last weight is the bias.
std::vector<double> predictive_scores(const Matrix& posterior_samples, const Dataset& test, bool intercept);

/// Mann–Whitney AUC with ties counted half. Throws if only one class is present.
double auc(const std::vector<double>& scores, const Vector& labels);

struct ClassifierMetrics {
  double accuracy = 0.0;
  std::optional<double> auc;  // empty when the test set has one class
};

ClassifierMetrics evaluate_classifier(const Matrix& posterior_samples, const Dataset& test,
                                      bool intercept = false);

/// Threshold-0.5 accuracy and AUC of precomputed scores.
ClassifierMetrics evaluate_scores(const std::vector<double>& scores, const Vector& labels);

}  // namespace vhmc
