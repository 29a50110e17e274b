#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pavesat/ensemble/prediction.hpp"

namespace pavesat::ensemble {

enum class CombineMode { Uniform, AccuracyWeighted };

struct EnsembleConfig {
  CombineMode mode = CombineMode::Uniform;
  /// Per-model accuracy in [0,1], same order as the predictions. Required
  /// for AccuracyWeighted.
  std::vector<double> accuracies;
};

struct EnsemblePrediction {
  std::vector<std::string> sample_ids;
  std::vector<ProbabilityRow> rows;
  std::vector<int> predicted;  // class index, ties to the lowest index
};

/// Averages (or accuracy-weights) the model probability rows per sample and
/// takes the argmax. Class sums are exact and rounded once, so the result
/// does not depend on the model order.
EnsemblePrediction combine(const std::vector<ModelPrediction>& preds, const EnsembleConfig& cfg = {});

struct ModelReport {
  std::string model_id;
  double accuracy = 0;
};

/// The k most accurate model ids; equal accuracies are ordered by id.
std::vector<std::string> top_k_select(std::vector<ModelReport> reports, std::size_t k);

CombineMode parse_combine_mode(const std::string& text);
std::string to_string(CombineMode mode);

}  // namespace pavesat::ensemble
