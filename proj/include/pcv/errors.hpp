#pragma once

#include <stdexcept>
#include <string>

namespace pcv {

// Syntactically broken input (bad JSON, malformed CSV, unreadable PLY).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input that violates a model invariant.  Messages name the
// offending coordinates (gof / tile / level) so failures are actionable.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Trace row count disagrees with the manifest's GOF count.
class LengthMismatch : public std::runtime_error {
 public:
  LengthMismatch(const std::string& table, long long expected, long long actual)
      : std::runtime_error(table + ": expected " + std::to_string(expected) +
                           " rows, got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}
  long long expected() const { return expected_; }
  long long actual() const { return actual_; }

 private:
  long long expected_;
  long long actual_;
};

// A point-cloud frame with zero vertices where points are required.
class EmptyFrame : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Compression model whose parameter lists cannot yield a valid manifest.
class InvalidModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive enumeration would exceed the configured cap.
class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Degenerate allocation instance: no visible tile carries quality weight, so
// the objective is undefined.  Callers may fall back to a trivial plan.
class NoVisibleTiles : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quality-ratio denominator is zero; the log score cannot be evaluated.
class DegenerateQoE : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcv
