#pragma once

#include <stdexcept>
#include <string>

namespace twistor {

// Base class for all engine errors. Specific types mirror the failure
// modes the operations can report, so callers can catch selectively.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutOfChart : Error {
  explicit OutOfChart(const std::string& msg) : Error(msg) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

struct DegenerateEigenspace : Error {
  explicit DegenerateEigenspace(const std::string& msg) : Error(msg) {}
};

struct FrameDegenerate : Error {
  explicit FrameDegenerate(const std::string& msg) : Error(msg) {}
};

struct NotAlgebraIso : Error {
  explicit NotAlgebraIso(const std::string& msg) : Error(msg) {}
};

struct BadType : Error {
  explicit BadType(const std::string& msg) : Error(msg) {}
};

struct NonPositiveFactor : Error {
  explicit NonPositiveFactor(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace twistor
