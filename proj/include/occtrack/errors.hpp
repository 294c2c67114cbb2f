#pragma once

#include <stdexcept>
#include <string>

namespace occtrack {

/// Kalman state cannot be converted back to a box (h <= 0 or a <= 0).
struct DegenerateState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cosine distance requested against a zero-norm vector.
struct ZeroVector : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Transport marginals are non-positive or their masses differ.
struct InvalidMarginals : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Rejection sampling could not place a background crop under the IoU bound.
struct NoValidCrop : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonMonotonicFrame : std::logic_error {
  using std::logic_error::logic_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& path, int line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
        line_number(line) {}
  int line_number;
};

struct NonPositiveBox : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// CLEAR metrics are undefined without ground truth.
struct EmptyGroundTruth : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidConfig : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace occtrack
