#include "pavesat/ensemble/interchange.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <unordered_map>

#include "pavesat/csv.hpp"
#include "pavesat/error.hpp"
#include "pavesat/pmis/condition.hpp"

namespace pavesat::ensemble {
namespace {

const std::vector<std::string> kProbColumns = {"p1", "p2", "p3", "p4", "p5"};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

ProbabilityRow read_row(const csv::Table& t, std::size_t r, const std::vector<std::size_t>& cols) {
  ProbabilityRow row{};
  double sum = 0;
  for (int c = 0; c < kClasses; ++c) {
    row[c] = t.number(r, cols[c]);
    if (!(row[c] >= 0.0 && row[c] <= 1.0)) {
      throw FormatError(t.source + ":" + std::to_string(r + 2) + ": probability outside [0,1]");
    }
    sum += row[c];
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw FormatError(t.source + ":" + std::to_string(r + 2) + ": probabilities sum to " + csv::format_number(sum) +
                      " (tolerance 1e-6)");
  }
  return row;
}

std::vector<std::size_t> prob_columns(const csv::Table& t) {
  std::vector<std::size_t> cols;
  for (const auto& name : kProbColumns) cols.push_back(t.column(name));
  return cols;
}

}  // namespace

std::vector<ModelPrediction> parse_predictions(std::istream& in, const std::string& source) {
  const csv::Table t = csv::parse(in, source);
  const std::size_t c_sample = t.column("sample_id");
  const std::size_t c_model = t.column("model_id");
  const auto cols = prob_columns(t);

  std::vector<ModelPrediction> preds;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string& model = t.rows[r][c_model];
    if (model.empty() || t.rows[r][c_sample].empty()) {
      throw FormatError(source + ":" + std::to_string(r + 2) + ": empty sample_id or model_id");
    }
    auto [it, inserted] = index.emplace(model, preds.size());
    if (inserted) preds.push_back(ModelPrediction{model, {}, {}});
    auto& p = preds[it->second];
    p.sample_ids.push_back(t.rows[r][c_sample]);
    p.rows.push_back(read_row(t, r, cols));
  }
  return preds;
}

std::vector<ModelPrediction> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_predictions(in, path.string());
}

void write_predictions(const std::vector<ModelPrediction>& preds, std::ostream& out) {
  out << "sample_id,model_id,p1,p2,p3,p4,p5\n";
  for (const auto& p : preds) {
    p.validate();
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
      std::vector<std::string> fields = {p.sample_ids[i], p.model_id};
      for (double v : p.rows[i]) fields.push_back(csv::format_number(v));
      csv::write_row(out, fields);
    }
  }
}

void write_predictions(const std::vector<ModelPrediction>& preds, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_predictions(preds, out);
  if (!out) throw Error("write failed: " + path.string());
}

std::map<std::string, double> read_accuracies(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw FormatError(path.string() + ": expected an object of model_id: accuracy");
  std::map<std::string, double> out;
  for (const auto& [id, v] : j.items()) {
    if (!v.is_number()) throw FormatError(path.string() + ": accuracy of '" + id + "' is not a number");
    const double a = v.get<double>();
    if (!(a >= 0.0 && a <= 1.0)) throw FormatError(path.string() + ": accuracy of '" + id + "' outside [0,1]");
    out[id] = a;
  }
  return out;
}

void write_accuracies(const std::map<std::string, double>& accuracies, const std::filesystem::path& path) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [id, a] : accuracies) j[id] = a;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_ensemble(const EnsemblePrediction& ens, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "sample_id,p1,p2,p3,p4,p5,predicted_index,predicted_class\n";
  for (std::size_t i = 0; i < ens.rows.size(); ++i) {
    std::vector<std::string> fields = {ens.sample_ids[i]};
    for (double v : ens.rows[i]) fields.push_back(csv::format_number(v));
    fields.push_back(std::to_string(ens.predicted[i]));
    fields.push_back(std::string(pmis::class_name(pmis::class_from_index(ens.predicted[i]))));
    csv::write_row(out, fields);
  }
  if (!out) throw Error("write failed: " + path.string());
}

EnsemblePrediction read_ensemble(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::size_t c_sample = t.column("sample_id");
  const std::size_t c_pred = t.column("predicted_index");
  const auto cols = prob_columns(t);
  EnsemblePrediction ens;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    ens.sample_ids.push_back(t.rows[r][c_sample]);
    ens.rows.push_back(read_row(t, r, cols));
    const double idx = t.number(r, c_pred);
    if (idx < 0 || idx >= kClasses || idx != std::floor(idx)) {
      throw FormatError(t.source + ":" + std::to_string(r + 2) + ": invalid predicted_index");
    }
    ens.predicted.push_back(static_cast<int>(idx));
  }
  return ens;
}

}  // namespace pavesat::ensemble
