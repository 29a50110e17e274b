#include "pavesat/pmis/condition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pavesat/error.hpp"

namespace pavesat::pmis {
namespace {

constexpr double kMinRide = 0.1;
constexpr double kMaxRide = 5.0;
constexpr std::array<std::string_view, kNumClasses> kNames = {"VeryGood", "Good", "Fair", "Poor",
                                                              "VeryPoor"};

std::string num(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

void UtilityCoefficients::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1], got " + num(alpha));
  if (!(rho > 0.0)) throw DomainError("rho must be > 0, got " + num(rho));
  if (!(beta > 0.0)) throw DomainError("beta must be > 0, got " + num(beta));
}

ConditionScore::ConditionScore(double value) : value_(value) {
  if (!(value >= 1.0 && value <= 100.0)) {
    throw DomainError("condition score must lie in [1, 100], got " + num(value));
  }
}

ConditionScore ConditionScore::clamped(double raw) {
  if (std::isnan(raw)) throw DomainError("condition score is NaN");
  return ConditionScore(std::clamp(raw, 1.0, 100.0));
}

ConditionClass class_from_index(int index) {
  if (index < 0 || index >= kNumClasses) {
    throw DomainError("class index " + std::to_string(index) + " outside [0, 5)");
  }
  return static_cast<ConditionClass>(index);
}

std::string_view class_name(ConditionClass c) { return kNames[class_index(c)]; }

ConditionClass class_from_name(std::string_view name) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (kNames[i] == name) return static_cast<ConditionClass>(i);
  }
  throw DomainError("unknown condition class '" + std::string(name) + "'");
}

std::vector<std::string> class_names() { return {kNames.begin(), kNames.end()}; }

double distress_utility(const UtilityCoefficients& c, double quantity) {
  c.validate();
  if (!(quantity >= 0.0)) throw DomainError("distress quantity must be >= 0, got " + num(quantity));
  if (quantity == 0.0) return 1.0;
  return 1.0 - c.alpha * std::exp(-std::pow(c.rho / quantity, c.beta));
}

double distress_score(std::span<const DistressRecord> records) {
  double product = 1.0;
  for (const auto& r : records) product *= distress_utility(r.coefficients, r.quantity);
  return 100.0 * product;
}

double ride_score(const RideRecord& ride) {
  if (ride.samples.empty()) throw DomainError("ride record has no serviceability samples");
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& s : ride.samples) {
    if (!(s.si >= kMinRide && s.si <= kMaxRide)) {
      throw DomainError("serviceability index " + num(s.si) + " outside [0.1, 5.0]");
    }
    if (!(s.length > 0.0)) throw DomainError("SI segment length must be > 0, got " + num(s.length));
    weighted += s.si * s.length;
    total += s.length;
  }
  return weighted / total;
}

RideUtilityCurve::RideUtilityCurve() : knots_{{0.0, 0.0}, {kMaxRide, 1.0}} {}

RideUtilityCurve::RideUtilityCurve(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw ParameterError("ride utility curve needs at least 2 knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!(knots_[i].second >= 0.0 && knots_[i].second <= 1.0)) {
      throw ParameterError("ride utility curve value " + num(knots_[i].second) + " outside [0, 1]");
    }
    if (i > 0 && !(knots_[i].first > knots_[i - 1].first)) {
      throw ParameterError("ride utility curve knots must be strictly increasing in ride score");
    }
  }
}

double RideUtilityCurve::operator()(double ride) const {
  if (ride <= knots_.front().first) return knots_.front().second;
  if (ride >= knots_.back().first) return knots_.back().second;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), ride,
                                   [](double v, const auto& k) { return v < k.first; });
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  return y0 + (y1 - y0) * (ride - x0) / (x1 - x0);
}

double ride_utility(double ride, const RideUtilityCurve& curve) {
  if (!(ride >= kMinRide && ride <= kMaxRide)) {
    throw DomainError("ride score " + num(ride) + " outside [0.1, 5.0]");
  }
  return curve(ride);
}

ConditionScore condition_score(double u_ride, std::span<const double> distress_utilities) {
  auto check = [](double u, const char* what) {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError(std::string(what) + " " + num(u) + " outside [0, 1]");
  };
  check(u_ride, "ride utility");
  double raw = u_ride * 100.0;
  for (double u : distress_utilities) {
    check(u, "distress utility");
    raw *= u;
  }
  return ConditionScore::clamped(raw);
}

ConditionClass classify(ConditionScore cs) {
  const double v = cs.value();
  if (v >= 90.0) return ConditionClass::VeryGood;
  if (v >= 70.0) return ConditionClass::Good;
  if (v >= 50.0) return ConditionClass::Fair;
  if (v >= 35.0) return ConditionClass::Poor;
  return ConditionClass::VeryPoor;
}

}  // namespace pavesat::pmis
