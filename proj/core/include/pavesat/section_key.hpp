#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace pavesat {

/// PMIS section identity: route name plus offsets. Offsets are held in
/// thousandths of a mile so keys parsed from CSV and JSON compare equal.
struct SectionKey {
  std::string route_name;
  std::int64_t from_milli = 0;
  std::int64_t to_milli = 0;

  static SectionKey from_miles(std::string route_name, double offset_from, double offset_to);

  double offset_from() const { return static_cast<double>(from_milli) / 1000.0; }
  double offset_to() const { return static_cast<double>(to_milli) / 1000.0; }

  /// Stable text form used as sample id and file stem, e.g. "FM1960_12.000_12.500".
  std::string id() const;
  std::string describe() const;

  auto operator<=>(const SectionKey&) const = default;
};

}  // namespace pavesat
