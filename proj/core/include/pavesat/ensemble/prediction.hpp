#pragma once

#include <array>
#include <string>
#include <vector>

namespace pavesat::ensemble {

constexpr int kClasses = 5;
using ProbabilityRow = std::array<double, kClasses>;

/// Class probabilities of one model over an ordered list of samples.
/// Columns follow pmis class index order.
struct ModelPrediction {
  std::string model_id;
  std::vector<std::string> sample_ids;
  std::vector<ProbabilityRow> rows;

  /// Throws FormatError unless rows are in [0,1] and sum to 1 within `tolerance`.
  void validate(double tolerance = 1e-6) const;
};

/// Index of the largest entry; ties go to the lowest index.
int argmax(const ProbabilityRow& row);

}  // namespace pavesat::ensemble
