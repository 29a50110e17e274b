#pragma once

#include <stdexcept>
#include <string>

namespace pavesat {

/// Base for every error raised by the library. Messages are meant to be
/// shown to a user as-is, so they name the offending route, key, or layer.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RangeError : public Error { using Error::Error; };
class ParameterError : public Error { using Error::Error; };
class GeometryError : public Error { using Error::Error; };
class CrsError : public Error { using Error::Error; };
class EmptyCropError : public Error { using Error::Error; };
class CoverageError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class AmbiguityError : public Error { using Error::Error; };
class DegenerateInputError : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };
class AlignmentError : public Error { using Error::Error; };
class NonFiniteLossError : public Error { using Error::Error; };

/// Malformed or unreadable input files (CSV, JSON, GeoTIFF, PNG, weights).
class FormatError : public Error { using Error::Error; };

}  // namespace pavesat
