#include "pavesat/metrics/io.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "pavesat/csv.hpp"
#include "pavesat/error.hpp"

namespace pavesat::metrics {

void write_confusion(const ConfusionMatrix& m, const std::filesystem::path& path) {
  m.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  std::vector<std::string> header = {"true\\predicted"};
  header.insert(header.end(), m.class_names.begin(), m.class_names.end());
  csv::write_row(out, header);
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<std::string> row = {m.class_names[i]};
    for (auto v : m.counts[i]) row.push_back(std::to_string(v));
    csv::write_row(out, row);
  }
  if (!out) throw Error("write failed: " + path.string());
}

ConfusionMatrix read_confusion(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  if (t.header.size() < 2) throw FormatError(path.string() + ": no class columns");
  ConfusionMatrix m(std::vector<std::string>(t.header.begin() + 1, t.header.end()));
  if (t.rows.size() != m.size()) throw FormatError(path.string() + ": matrix is not square");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (t.rows[i][0] != m.class_names[i]) {
      throw FormatError(path.string() + ": row " + std::to_string(i + 1) + " is '" + t.rows[i][0] + "', expected '" +
                        m.class_names[i] + "'");
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      const double v = t.number(i, j + 1);
      if (v < 0 || v != std::floor(v)) throw FormatError(path.string() + ": counts must be nonnegative integers");
      m.counts[i][j] = static_cast<std::int64_t>(v);
    }
  }
  return m;
}

void write_summary(const MetricsSummary& s, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["accuracy"] = s.accuracy;
  j["correct"] = s.correct;
  j["total"] = s.total;
  j["averaging"] = to_string(s.averaging);
  j["precision"] = s.headline().precision;
  j["recall"] = s.headline().recall;
  j["f1"] = s.headline().f1;
  for (const auto* name : {"macro", "weighted"}) {
    const Aggregate& a = std::string(name) == "macro" ? s.macro : s.weighted;
    j[name] = {{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1}};
  }
  auto& classes = j["per_class"] = nlohmann::ordered_json::array();
  for (const auto& c : s.per_class) {
    nlohmann::ordered_json e;
    e["class"] = c.name;
    e["precision"] = c.precision;
    e["recall"] = c.recall;
    e["f1"] = c.f1;
    e["support"] = c.support;
    e["predicted"] = c.predicted;
    e["precision_defined"] = c.precision_defined;
    e["recall_defined"] = c.recall_defined;
    classes.push_back(e);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw Error("write failed: " + path.string());
}

MetricsSummary read_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    MetricsSummary s;
    s.accuracy = j.at("accuracy").get<double>();
    s.correct = j.at("correct").get<std::int64_t>();
    s.total = j.at("total").get<std::int64_t>();
    s.averaging = parse_averaging(j.at("averaging").get<std::string>());
    auto agg = [&](const char* name) {
      const auto& a = j.at(name);
      return Aggregate{a.at("precision").get<double>(), a.at("recall").get<double>(), a.at("f1").get<double>()};
    };
    s.macro = agg("macro");
    s.weighted = agg("weighted");
    for (const auto& e : j.at("per_class")) {
      ClassMetrics c;
      c.name = e.at("class").get<std::string>();
      c.precision = e.at("precision").get<double>();
      c.recall = e.at("recall").get<double>();
      c.f1 = e.at("f1").get<double>();
      c.support = e.at("support").get<std::int64_t>();
      c.predicted = e.at("predicted").get<std::int64_t>();
      c.precision_defined = e.at("precision_defined").get<bool>();
      c.recall_defined = e.at("recall_defined").get<bool>();
      s.per_class.push_back(c);
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace pavesat::metrics
