#include "pavesat/metrics/metrics.hpp"

#include <algorithm>
#include <unordered_map>

#include "pavesat/error.hpp"

namespace pavesat::metrics {
namespace {

// Counts below 2^53 convert exactly, so one division gives the correctly rounded ratio.
double ratio(std::int64_t num, std::int64_t den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> names)
    : class_names(std::move(names)),
      counts(class_names.size(), std::vector<std::int64_t>(class_names.size(), 0)) {}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (const auto& row : counts) for (auto v : row) t += v;
  return t;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
  return t;
}

std::int64_t ConfusionMatrix::row_sum(std::size_t i) const {
  std::int64_t t = 0;
  for (auto v : counts.at(i)) t += v;
  return t;
}

std::int64_t ConfusionMatrix::column_sum(std::size_t j) const {
  std::int64_t t = 0;
  for (const auto& row : counts) t += row.at(j);
  return t;
}

void ConfusionMatrix::validate() const {
  if (counts.size() != class_names.size()) throw ShapeError("confusion matrix rows do not match class names");
  for (const auto& row : counts) {
    if (row.size() != class_names.size()) throw ShapeError("confusion matrix is not square");
    for (auto v : row) {
      if (v < 0) throw FormatError("confusion matrix has a negative count");
    }
  }
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted,
                          std::vector<std::string> class_names) {
  if (truth.size() != predicted.size()) {
    throw ShapeError("confusion: " + std::to_string(truth.size()) + " true labels vs " +
                     std::to_string(predicted.size()) + " predictions");
  }
  ConfusionMatrix m(std::move(class_names));
  const int c = static_cast<int>(m.size());
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (truth[t] < 0 || truth[t] >= c || predicted[t] < 0 || predicted[t] >= c) {
      throw RangeError("confusion: label index outside 0.." + std::to_string(c - 1) + " at position " +
                       std::to_string(t));
    }
    ++m.counts[truth[t]][predicted[t]];
  }
  return m;
}

ConfusionMatrix confusion(std::span<const std::string> truth, std::span<const std::string> predicted,
                          std::vector<std::string> class_names) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < class_names.size(); ++i) index.emplace(class_names[i], static_cast<int>(i));
  auto lookup = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw RangeError("confusion: unknown class '" + name + "'");
    return it->second;
  };
  std::vector<int> t, p;
  for (const auto& s : truth) t.push_back(lookup(s));
  for (const auto& s : predicted) p.push_back(lookup(s));
  return confusion(std::span<const int>(t), std::span<const int>(p), std::move(class_names));
}

double accuracy(const ConfusionMatrix& m) {
  m.validate();
  const auto total = m.total();
  if (total == 0) throw DegenerateInputError("accuracy of an empty confusion matrix");
  return ratio(m.trace(), total);
}

PrecisionRecall precision_recall(const ConfusionMatrix& m, std::size_t class_index) {
  m.validate();
  if (class_index >= m.size()) throw RangeError("class index " + std::to_string(class_index) + " out of range");
  PrecisionRecall pr;
  const auto tp = m.counts[class_index][class_index];
  const auto col = m.column_sum(class_index);
  const auto row = m.row_sum(class_index);
  pr.precision_defined = col > 0;
  pr.recall_defined = row > 0;
  pr.precision = col > 0 ? ratio(tp, col) : 0.0;
  pr.recall = row > 0 ? ratio(tp, row) : 0.0;
  return pr;
}

double f1(double precision, double recall) {
  const double s = precision + recall;
  return s > 0 ? 2.0 * precision * recall / s : 0.0;
}

MetricsSummary summarize(const ConfusionMatrix& m, Averaging averaging) {
  m.validate();
  MetricsSummary s;
  s.averaging = averaging;
  s.total = m.total();
  if (s.total == 0) throw DegenerateInputError("cannot summarize an empty confusion matrix");
  s.correct = m.trace();
  s.accuracy = ratio(s.correct, s.total);

  long double macro_p = 0, macro_r = 0, macro_f = 0, w_p = 0, w_f = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto pr = precision_recall(m, i);
    ClassMetrics cm;
    cm.name = m.class_names[i];
    cm.precision = pr.precision;
    cm.recall = pr.recall;
    cm.f1 = f1(pr.precision, pr.recall);
    cm.support = m.row_sum(i);
    cm.predicted = m.column_sum(i);
    cm.precision_defined = pr.precision_defined;
    cm.recall_defined = pr.recall_defined;
    macro_p += cm.precision;
    macro_r += cm.recall;
    macro_f += cm.f1;
    w_p += static_cast<long double>(cm.support) * cm.precision;
    w_f += static_cast<long double>(cm.support) * cm.f1;
    s.per_class.push_back(cm);
  }
  const auto c = static_cast<long double>(m.size());
  s.macro = {static_cast<double>(macro_p / c), static_cast<double>(macro_r / c), static_cast<double>(macro_f / c)};
  // Support-weighted recall reduces to trace / total.
  s.weighted = {static_cast<double>(w_p / s.total), s.accuracy, static_cast<double>(w_f / s.total)};
  return s;
}

std::string to_string(Averaging a) { return a == Averaging::Macro ? "macro" : "weighted"; }

Averaging parse_averaging(const std::string& text) {
  if (text == "macro") return Averaging::Macro;
  if (text == "weighted") return Averaging::Weighted;
  throw ParameterError("unknown averaging '" + text + "' (expected macro or weighted)");
}

}  // namespace pavesat::metrics
