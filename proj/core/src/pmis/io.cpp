#include "pavesat/pmis/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "pavesat/csv.hpp"
#include "pavesat/error.hpp"

namespace pavesat::pmis {
namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::set<std::string> kKeyColumns = {"route_name", "offset_from", "offset_to",
                                           "condition_score", "condition_class", "ride_score"};

}  // namespace

CoefficientTable parse_coefficients(const std::string& json_text) {
  CoefficientTable table;
  try {
    const auto j = nlohmann::json::parse(json_text);
    for (const auto& [type, v] : j.items()) {
      UtilityCoefficients c{v.at("alpha").get<double>(), v.at("rho").get<double>(),
                            v.at("beta").get<double>()};
      try {
        c.validate();
      } catch (const DomainError& e) {
        throw DomainError("distress type '" + type + "': " + e.what());
      }
      table.emplace(type, c);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("coefficient table: ") + e.what());
  }
  return table;
}

CoefficientTable read_coefficients(const std::filesystem::path& path) {
  return parse_coefficients(slurp(path));
}

RideUtilityCurve read_ride_curve(const std::filesystem::path& path) {
  try {
    const auto j = nlohmann::json::parse(slurp(path));
    std::vector<std::pair<double, double>> knots;
    for (const auto& k : j.at("knots")) knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
    return RideUtilityCurve(std::move(knots));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<PmisRecord> read_pmis_records(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  const auto c_route = t.column("route_name");
  const auto c_from = t.column("offset_from");
  const auto c_to = t.column("offset_to");
  const auto c_cs = t.find_column("condition_score");
  const auto c_ride = t.find_column("ride_score");
  if (!c_cs && !c_ride) {
    throw FormatError(path.string() + ": needs a condition_score or ride_score column");
  }
  std::vector<std::size_t> distress_cols;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (!kKeyColumns.count(t.header[i])) distress_cols.push_back(i);
  }

  std::vector<PmisRecord> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    PmisRecord rec;
    rec.key = SectionKey::from_miles(t.rows[r][c_route], t.number(r, c_from), t.number(r, c_to));
    if (c_cs && !t.rows[r][*c_cs].empty()) rec.condition_score = t.number(r, *c_cs);
    if (c_ride && !t.rows[r][*c_ride].empty()) {
      rec.ride_score = t.number(r, *c_ride);
      for (auto c : distress_cols) {
        if (!t.rows[r][c].empty()) rec.distress[t.header[c]] = t.number(r, c);
      }
    }
    if (!rec.condition_score && !rec.ride_score) {
      throw FormatError(path.string() + ": line " + std::to_string(r + 2) +
                        " has neither condition_score nor ride_score");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

ConditionScore resolve_condition_score(const PmisRecord& record, const CoefficientTable* table,
                                       const RideUtilityCurve& curve) {
  if (record.ride_score && table != nullptr) {
    std::vector<double> utilities;
    for (const auto& [type, quantity] : record.distress) {
      const auto it = table->find(type);
      if (it == table->end()) {
        throw DomainError("section " + record.key.describe() + ": no coefficients for distress type '" +
                          type + "'");
      }
      utilities.push_back(distress_utility(it->second, quantity));
    }
    return condition_score(ride_utility(*record.ride_score, curve), utilities);
  }
  if (record.condition_score) return ConditionScore(*record.condition_score);
  throw DomainError("section " + record.key.describe() +
                    " has ride/distress data but no coefficient table was supplied");
}

void write_labels(const std::filesystem::path& path, const std::vector<LabelRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  csv::write_row(out, {"route_name", "offset_from", "offset_to", "condition_score", "condition_class"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.key.route_name, csv::format_number(r.key.offset_from()),
                         csv::format_number(r.key.offset_to()), csv::format_number(r.condition_score),
                         std::string(class_name(r.condition_class))});
  }
}

std::vector<LabelRow> read_labels(const std::filesystem::path& path) {
  const auto t = csv::read(path);
  const auto c_route = t.column("route_name");
  const auto c_from = t.column("offset_from");
  const auto c_to = t.column("offset_to");
  const auto c_cs = t.column("condition_score");
  std::vector<LabelRow> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    LabelRow row;
    row.key = SectionKey::from_miles(t.rows[r][c_route], t.number(r, c_from), t.number(r, c_to));
    const ConditionScore cs(t.number(r, c_cs));
    row.condition_score = cs.value();
    row.condition_class = classify(cs);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace pavesat::pmis
