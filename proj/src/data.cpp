#include "vhmc/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "vhmc/errors.hpp"
#include "vhmc/kernels.hpp"

namespace vhmc {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty() || s == "?") return std::nullopt;
  double v = 0.0;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool is_missing(const std::string& s) { return s.empty() || s == "?"; }

std::string stem(const std::string& path) {
  const auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& label_column, const std::string& positive_label,
                 CsvLoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_fields(line));
  }
  if (rows.empty()) throw DataError("dataset file '" + path + "' is empty");

  const std::size_t width = rows.front().size();
  std::optional<long> index;
  {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(label_column.data(), label_column.data() + label_column.size(), v);
    if (ec == std::errc() && ptr == label_column.data() + label_column.size()) index = v;
  }

  // Header: the label column is named in the first row, or some feature cell there is non-numeric.
  bool header = false;
  std::size_t label_idx = 0;
  if (index) {
    const long w = static_cast<long>(width);
    const long resolved = *index < 0 ? w + *index : *index;
    if (resolved < 0 || resolved >= w) throw DataError("label column index out of range");
    label_idx = static_cast<std::size_t>(resolved);
    for (std::size_t j = 0; j < width; ++j) {
      if (j != label_idx && !is_missing(rows[0][j]) && !parse_number(rows[0][j])) header = true;
    }
  } else {
    const auto it = std::find(rows[0].begin(), rows[0].end(), label_column);
    if (it == rows[0].end()) throw DataError("label column '" + label_column + "' not found in header");
    label_idx = static_cast<std::size_t>(std::distance(rows[0].begin(), it));
    header = true;
  }

  Dataset ds;
  ds.name = stem(path);
  for (std::size_t j = 0; j < width; ++j) {
    if (j == label_idx) continue;
    ds.feature_names.push_back(header ? rows[0][j] : "x" + std::to_string(j));
  }

  std::vector<std::vector<double>> features;
  std::vector<std::string> labels;
  std::size_t dropped = 0;
  for (std::size_t r = header ? 1 : 0; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (cells.size() != width || is_missing(cells[label_idx])) {
      ++dropped;
      continue;
    }
    std::vector<double> values;
    bool ok = true;
    for (std::size_t j = 0; j < width && ok; ++j) {
      if (j == label_idx) continue;
      const auto v = parse_number(cells[j]);
      if (!v) ok = false;
      else values.push_back(*v);
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    features.push_back(std::move(values));
    labels.push_back(cells[label_idx]);
  }
  if (dropped > 0) std::clog << "[data] " << ds.name << ": dropped " << dropped << " incomplete rows\n";
  if (stats) stats->dropped_rows = dropped;
  if (features.empty()) throw DataError("no complete rows in dataset '" + path + "'");

  const std::set<std::string> distinct(labels.begin(), labels.end());
  if (distinct.size() > 2) throw DataError("labels in '" + path + "' are not binary");
  if (distinct.size() < 2 || !distinct.count(positive_label))
    throw DataError("dataset '" + path + "' does not contain both classes (positive label '" + positive_label +
                    "')");

  ds.features.resize(static_cast<Eigen::Index>(features.size()), static_cast<Eigen::Index>(width - 1));
  ds.labels.resize(static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (std::size_t j = 0; j < features[i].size(); ++j)
      ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = features[i][j];
    ds.labels[static_cast<Eigen::Index>(i)] = labels[i] == positive_label ? 1.0 : 0.0;
  }
  return ds;
}

Dataset normalize(const Dataset& ds, std::vector<std::string>* dropped_columns) {
  const auto n = static_cast<double>(ds.size());
  std::vector<Eigen::Index> keep;
  std::vector<double> means;
  std::vector<double> stds;
  for (Eigen::Index j = 0; j < ds.dim(); ++j) {
    const double mean = ds.features.col(j).mean();
    const double var = (ds.features.col(j).array() - mean).square().sum() / n;
    if (var > 0.0 && std::isfinite(var)) {
      keep.push_back(j);
      means.push_back(mean);
      stds.push_back(std::sqrt(var));
    } else {
      const std::string name = j < static_cast<Eigen::Index>(ds.feature_names.size())
                                   ? ds.feature_names[static_cast<std::size_t>(j)]
                                   : "x" + std::to_string(j);
      std::clog << "[data] " << ds.name << ": dropped constant column " << name << "\n";
      if (dropped_columns) dropped_columns->push_back(name);
    }
  }
  if (keep.empty()) throw DataError("every feature column of '" + ds.name + "' is constant");
  Dataset out;
  out.name = ds.name;
  out.labels = ds.labels;
  out.features.resize(ds.size(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    out.features.col(col) = (ds.features.col(keep[k]).array() - means[k]) / stds[k];
    if (keep[k] < static_cast<Eigen::Index>(ds.feature_names.size()))
      out.feature_names.push_back(ds.feature_names[static_cast<std::size_t>(keep[k])]);
  }
  return out;
}

namespace {

Dataset take_rows(const Dataset& ds, const std::vector<Eigen::Index>& rows) {
  Dataset out;
  out.name = ds.name;
  out.feature_names = ds.feature_names;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.dim());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(rows[i]);
    out.labels[static_cast<Eigen::Index>(i)] = ds.labels[rows[i]];
  }
  return out;
}

}  // namespace

DataSplit split(const Dataset& ds, double test_fraction, Rng& rng) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw DataError("test fraction must lie in (0, 1)");
  DataSplit out;
  for (double cls : {0.0, 1.0}) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
      if (ds.labels[i] == cls) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(members.size())));
    if (n_test == 0 || n_test >= members.size())
      throw DataError("split would leave class " + std::to_string(static_cast<int>(cls)) + " empty on one side");
    out.test_index.insert(out.test_index.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train_index.insert(out.train_index.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test),
                           members.end());
  }
  std::sort(out.train_index.begin(), out.train_index.end());
  std::sort(out.test_index.begin(), out.test_index.end());
  out.train = take_rows(ds, out.train_index);
  out.test = take_rows(ds, out.test_index);
  return out;
}

std::vector<double> predictive_scores(const Matrix& posterior_samples, const Dataset& test, bool intercept) {
  if (posterior_samples.rows() == 0) throw Error("classifier evaluation needs at least one posterior sample");
  const Eigen::Index expected = test.dim() + (intercept ? 1 : 0);
  if (posterior_samples.cols() != expected) throw Error("posterior dimension does not match the test features");
  // Activations for every (datum, draw) pair: N×S.
  Matrix activation = test.features * posterior_samples.leftCols(test.dim()).transpose();
  if (intercept) activation.rowwise() += posterior_samples.col(test.dim()).transpose();
  std::vector<double> scores(static_cast<std::size_t>(test.size()));
  for (Eigen::Index n = 0; n < activation.rows(); ++n) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < activation.cols(); ++k) s += kernels::sigmoid(activation(n, k));
    scores[static_cast<std::size_t>(n)] = s / static_cast<double>(activation.cols());
  }
  return scores;
}

double auc(const std::vector<double>& scores, const Vector& labels) {
  if (static_cast<Eigen::Index>(scores.size()) != labels.size()) throw Error("score and label counts differ");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  double n_pos = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[static_cast<Eigen::Index>(order[k])] == 1.0) {
        positive_rank_sum += avg_rank;
        n_pos += 1.0;
      }
    }
    i = j;
  }
  const double n_neg = static_cast<double>(scores.size()) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) throw Error("AUC undefined: test set contains a single class");
  return (positive_rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

ClassifierMetrics evaluate_scores(const std::vector<double>& scores, const Vector& labels) {
  ClassifierMetrics m;
  double correct = 0.0;
  for (std::size_t n = 0; n < scores.size(); ++n) {
    const double predicted = scores[n] > 0.5 ? 1.0 : 0.0;
    correct += predicted == labels[static_cast<Eigen::Index>(n)] ? 1.0 : 0.0;
  }
  m.accuracy = scores.empty() ? 0.0 : correct / static_cast<double>(scores.size());
  try {
    m.auc = auc(scores, labels);
  } catch (const Error&) {
    m.auc.reset();
  }
  return m;
}

ClassifierMetrics evaluate_classifier(const Matrix& posterior_samples, const Dataset& test, bool intercept) {
  return evaluate_scores(predictive_scores(posterior_samples, test, intercept), test.labels);
}

}  // namespace vhmc
