#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pavesat/pmis/condition.hpp"
#include "pavesat/section_key.hpp"

namespace pavesat::pmis {

using CoefficientTable = std::map<std::string, UtilityCoefficients>;

/// `{distress_type: {alpha, rho, beta}}`
CoefficientTable read_coefficients(const std::filesystem::path& path);
CoefficientTable parse_coefficients(const std::string& json_text);

/// `{"knots": [[ride, utility], ...]}`
RideUtilityCurve read_ride_curve(const std::filesystem::path& path);

/// One PMIS row. `condition_score` is set for the direct-labeling form;
/// `ride_score` and `distress` for the extended form.
struct PmisRecord {
  SectionKey key;
  std::optional<double> condition_score;
  std::optional<double> ride_score;
  std::map<std::string, double> distress;  // distress_type -> quantity
};

/// Reads `route_name,offset_from,offset_to,condition_score` or the
/// extended form `route_name,offset_from,offset_to,ride_score,<distress...>`
/// in which every extra column is a distress quantity keyed by distress type.
std::vector<PmisRecord> read_pmis_records(const std::filesystem::path& path);

/// Score used for labeling: recomputed from ride and distress columns
/// when both the record and the coefficient table allow it, otherwise the
/// recorded condition score.
ConditionScore resolve_condition_score(const PmisRecord& record, const CoefficientTable* table,
                                       const RideUtilityCurve& curve);

struct LabelRow {
  SectionKey key;
  double condition_score = 0.0;
  ConditionClass condition_class = ConditionClass::VeryPoor;
};

/// `route_name,offset_from,offset_to,condition_score,condition_class`
void write_labels(const std::filesystem::path& path, const std::vector<LabelRow>& rows);
/// Reads the labels file, or a plain PMIS file carrying `condition_score`.
std::vector<LabelRow> read_labels(const std::filesystem::path& path);

}  // namespace pavesat::pmis
