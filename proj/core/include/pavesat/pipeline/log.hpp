#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace pavesat::pipeline {

enum class LogLevel { Debug, Info, Warning, Error };

/// Line-oriented logger. Text lines look like
///   2026-01-01T12:00:00Z INFO  build: wrote manifest train=560 test=100
/// and JSON lines carry the same fields as an object.
class Logger {
 public:
  using Fields = std::vector<std::pair<std::string, std::string>>;

  explicit Logger(std::ostream* out = nullptr, bool json = false, LogLevel min_level = LogLevel::Info);

  void log(LogLevel level, const std::string& stage, const std::string& message, const Fields& fields = {});
  void info(const std::string& stage, const std::string& message, const Fields& fields = {}) {
    log(LogLevel::Info, stage, message, fields);
  }
  void warn(const std::string& stage, const std::string& message, const Fields& fields = {}) {
    log(LogLevel::Warning, stage, message, fields);
  }
  void error(const std::string& stage, const std::string& message, const Fields& fields = {}) {
    log(LogLevel::Error, stage, message, fields);
  }
  void debug(const std::string& stage, const std::string& message, const Fields& fields = {}) {
    log(LogLevel::Debug, stage, message, fields);
  }

  /// Discards everything.
  static Logger& null();

 private:
  std::ostream* out_;
  bool json_;
  LogLevel min_level_;
};

}  // namespace pavesat::pipeline
