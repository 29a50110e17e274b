#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pavesat/ensemble/ensemble.hpp"
#include "pavesat/ensemble/prediction.hpp"

namespace pavesat::ensemble {

/// Prediction CSV: `sample_id,model_id,p1,p2,p3,p4,p5`, one row per
/// (sample, model). Rows whose probabilities do not sum to 1 within 1e-6 are
/// rejected. Models come back in order of first appearance.
std::vector<ModelPrediction> read_predictions(const std::filesystem::path& path);
std::vector<ModelPrediction> parse_predictions(std::istream& in, const std::string& source);
void write_predictions(const std::vector<ModelPrediction>& preds, const std::filesystem::path& path);
void write_predictions(const std::vector<ModelPrediction>& preds, std::ostream& out);

/// `{"model_id": accuracy, ...}`
std::map<std::string, double> read_accuracies(const std::filesystem::path& path);
void write_accuracies(const std::map<std::string, double>& accuracies, const std::filesystem::path& path);

/// `sample_id,p1..p5,predicted_index,predicted_class`
void write_ensemble(const EnsemblePrediction& ens, const std::filesystem::path& path);
EnsemblePrediction read_ensemble(const std::filesystem::path& path);

}  // namespace pavesat::ensemble
