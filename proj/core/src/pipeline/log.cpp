#include "pavesat/pipeline/log.hpp"

#include <chrono>
#include <ctime>
#include <nlohmann/json.hpp>
#include <ostream>

namespace pavesat::pipeline {
namespace {

const char* level_name(LogLevel l) {
  switch (l) {
    case LogLevel::Debug: return "DEBUG";
    case LogLevel::Info: return "INFO";
    case LogLevel::Warning: return "WARN";
    case LogLevel::Error: return "ERROR";
  }
  return "INFO";
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Logger::Logger(std::ostream* out, bool json, LogLevel min_level) : out_(out), json_(json), min_level_(min_level) {}

void Logger::log(LogLevel level, const std::string& stage, const std::string& message, const Fields& fields) {
  if (!out_ || level < min_level_) return;
  if (json_) {
    nlohmann::ordered_json j;
    j["time"] = timestamp();
    j["level"] = level_name(level);
    j["stage"] = stage;
    j["message"] = message;
    for (const auto& [k, v] : fields) j[k] = v;
    *out_ << j.dump() << '\n';
  } else {
    std::string line = timestamp() + " " + level_name(level) + " " + stage + ": " + message;
    for (const auto& [k, v] : fields) line += " " + k + "=" + v;
    *out_ << line << '\n';
  }
  out_->flush();
}

Logger& Logger::null() {
  static Logger instance;
  return instance;
}

}  // namespace pavesat::pipeline
