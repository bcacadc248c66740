#pragma once

#include <stdexcept>
#include <string>

namespace vc {

// Base class for all toolkit errors. Commands catch this at the top level
// and turn it into a single-line "error: ..." message with nonzero exit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Dimension or frame-count mismatch between operands.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Non-finite values where finite ones are required.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Invalid configuration: bad flags, contradictory settings, empty inputs.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Data that violates a contract: malformed paths, missing voiced frames,
// signals too short to analyze, no speech frames to evaluate.
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(msg) {}
};

// File-system and format failures.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace vc
