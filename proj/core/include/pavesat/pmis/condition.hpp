#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pavesat::pmis {

/// Shape coefficients of a distress utility curve.
struct UtilityCoefficients {
  double alpha = 0.0;  // maximum utility loss, in [0, 1]
  double rho = 1.0;    // same units as the distress quantity, > 0
  double beta = 1.0;   // > 0

  void validate() const;
};

struct DistressRecord {
  std::string distress_type;
  double quantity = 0.0;  // length or count, >= 0
  UtilityCoefficients coefficients;
};

struct SiSample {
  double si = 0.0;      // serviceability index, [0.1, 5.0]
  double length = 0.0;  // > 0
};

struct RideRecord {
  std::vector<SiSample> samples;
};

/// PMIS condition score in [1, 100].
class ConditionScore {
 public:
  /// Throws DomainError outside [1, 100].
  explicit ConditionScore(double value);
  /// Clamps to [1, 100].
  static ConditionScore clamped(double raw);

  double value() const { return value_; }
  auto operator<=>(const ConditionScore&) const = default;

 private:
  double value_;
};

/// Five PMIS condition states. The enumerator value is the class index
/// used for probability columns p1..p5 (index + 1).
enum class ConditionClass : std::uint8_t { VeryGood = 0, Good = 1, Fair = 2, Poor = 3, VeryPoor = 4 };

inline constexpr int kNumClasses = 5;
inline constexpr std::array<ConditionClass, kNumClasses> kAllClasses = {
    ConditionClass::VeryGood, ConditionClass::Good, ConditionClass::Fair, ConditionClass::Poor,
    ConditionClass::VeryPoor};

constexpr int class_index(ConditionClass c) { return static_cast<int>(c); }
ConditionClass class_from_index(int index);
/// 4 for VeryGood down to 0 for VeryPoor; larger is better condition.
constexpr int condition_rank(ConditionClass c) { return kNumClasses - 1 - class_index(c); }
std::string_view class_name(ConditionClass c);
ConditionClass class_from_name(std::string_view name);
std::vector<std::string> class_names();

/// U = 1 - alpha * exp(-(rho / L)^beta), with U = 1 at L = 0.
double distress_utility(const UtilityCoefficients& c, double quantity);

/// 100 times the product of distress utilities; 100 for no records.
double distress_score(std::span<const DistressRecord> records);

/// Length-weighted mean serviceability index.
double ride_score(const RideRecord& ride);

/// Piecewise-linear map from ride score to ride utility. The default is
/// the linear map ride / 5.
class RideUtilityCurve {
 public:
  RideUtilityCurve();
  /// Knots (ride, utility), strictly increasing in ride, utilities in [0, 1].
  explicit RideUtilityCurve(std::vector<std::pair<double, double>> knots);

  double operator()(double ride) const;
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_;
};

/// Throws DomainError when ride is outside [0.1, 5.0].
double ride_utility(double ride, const RideUtilityCurve& curve = RideUtilityCurve());

/// u_ride * 100 * prod(U_i), clamped to [1, 100].
ConditionScore condition_score(double u_ride, std::span<const double> distress_utilities);

/// [90,100] VeryGood, [70,90) Good, [50,70) Fair, [35,50) Poor, [1,35) VeryPoor.
ConditionClass classify(ConditionScore cs);

}  // namespace pavesat::pmis
