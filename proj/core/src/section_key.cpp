#include "pavesat/section_key.hpp"

#include <cmath>
#include <cstdio>

namespace pavesat {
namespace {

std::string milli_text(std::int64_t milli) {
  char buf[32];
  const char* sign = milli < 0 ? "-" : "";
  const auto a = milli < 0 ? -milli : milli;
  std::snprintf(buf, sizeof buf, "%s%lld.%03lld", sign, static_cast<long long>(a / 1000),
                static_cast<long long>(a % 1000));
  return buf;
}

}  // namespace

SectionKey SectionKey::from_miles(std::string route_name, double offset_from, double offset_to) {
  return SectionKey{std::move(route_name), std::llround(offset_from * 1000.0),
                    std::llround(offset_to * 1000.0)};
}

std::string SectionKey::id() const {
  std::string safe;
  for (char c : route_name) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '.';
    safe.push_back(ok ? c : '-');
  }
  return safe + "_" + milli_text(from_milli) + "_" + milli_text(to_milli);
}

std::string SectionKey::describe() const {
  return route_name + " [" + milli_text(from_milli) + ", " + milli_text(to_milli) + "]";
}

}  // namespace pavesat
