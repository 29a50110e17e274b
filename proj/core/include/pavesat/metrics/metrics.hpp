#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pavesat::metrics {

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::vector<std::string> class_names;
  std::vector<std::vector<std::int64_t>> counts;

  explicit ConfusionMatrix(std::vector<std::string> names = {});

  std::size_t size() const { return class_names.size(); }
  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(std::size_t i) const;
  std::int64_t column_sum(std::size_t j) const;
  void validate() const;
};

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted,
                          std::vector<std::string> class_names);
ConfusionMatrix confusion(std::span<const std::string> truth, std::span<const std::string> predicted,
                          std::vector<std::string> class_names);

/// trace / total. Throws DegenerateInputError on an empty matrix.
double accuracy(const ConfusionMatrix& m);

struct PrecisionRecall {
  double precision = 0;
  double recall = 0;
  bool precision_defined = true;  // false when nothing was predicted as the class
  bool recall_defined = true;     // false when the class has no true samples
};

PrecisionRecall precision_recall(const ConfusionMatrix& m, std::size_t class_index);

/// Harmonic mean, 0 when both are 0.
double f1(double precision, double recall);

enum class Averaging { Macro, Weighted };

struct ClassMetrics {
  std::string name;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::int64_t support = 0;    // true samples
  std::int64_t predicted = 0;  // predicted samples
  bool precision_defined = true;
  bool recall_defined = true;
};

struct Aggregate {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct MetricsSummary {
  double accuracy = 0;
  std::int64_t correct = 0;
  std::int64_t total = 0;
  std::vector<ClassMetrics> per_class;
  Aggregate macro;
  Aggregate weighted;
  Averaging averaging = Averaging::Weighted;

  /// The aggregate selected by `averaging`.
  const Aggregate& headline() const { return averaging == Averaging::Macro ? macro : weighted; }
};

MetricsSummary summarize(const ConfusionMatrix& m, Averaging averaging = Averaging::Weighted);

std::string to_string(Averaging a);
Averaging parse_averaging(const std::string& text);

}  // namespace pavesat::metrics
