#pragma once

#include <stdexcept>
#include <string>

namespace subvarx {

/// Base class for every recoverable error raised by the pipeline.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Paired sequences (masses vs stiffnesses, channels vs labels) differ in length.
class LengthMismatch : public Error {
public:
  using Error::Error;
};

/// A chain fails a structural invariant other than length or positivity.
class InvalidModel : public Error {
public:
  using Error::Error;
};

/// A physical parameter that must be strictly positive is zero or negative.
/// Carries the offending sequence name and 1-based index.
class NonPositiveParameter : public Error {
public:
  NonPositiveParameter(std::string sequence, int index, double value)
      : Error(sequence + "[" + std::to_string(index) + "] = " + std::to_string(value) +
              ": must be strictly positive"),
        sequence_(std::move(sequence)),
        index_(index) {}

  NonPositiveParameter(std::string name, double value)
      : Error(name + " = " + std::to_string(value) + ": must be strictly positive"),
        sequence_(std::move(name)),
        index_(0) {}

  const std::string &sequence() const { return sequence_; }
  int index() const { return index_; }

private:
  std::string sequence_;
  int index_;
};

class IndexOutOfRange : public Error {
public:
  using Error::Error;
};

class SeverityOutOfRange : public Error {
public:
  using Error::Error;
};

/// Substructure window does not fit the chain it is applied to.
class InvalidSpec : public Error {
public:
  using Error::Error;
};

/// Explicit integration step exceeds the central-difference stability limit.
class StabilityViolation : public Error {
public:
  StabilityViolation(double step, double frequency_bound, double max_stable_step)
      : Error("integration step h = " + std::to_string(step) +
              " s violates the central-difference stability limit: the chain's frequency bound is " +
              std::to_string(frequency_bound) + " rad/s, so h must be below " +
              std::to_string(max_stable_step) + " s; reduce ts or raise substep_ratio"),
        step_(step),
        frequency_bound_(frequency_bound),
        max_stable_step_(max_stable_step) {}

  double step() const { return step_; }
  double frequency_bound() const { return frequency_bound_; }
  double max_stable_step() const { return max_stable_step_; }

private:
  double step_;
  double frequency_bound_;
  double max_stable_step_;
};

/// A record does not contain a channel the caller asked for.
class MissingChannel : public Error {
public:
  using Error::Error;
};

class TooFewSamples : public Error {
public:
  using Error::Error;
};

class ChannelCountMismatch : public Error {
public:
  using Error::Error;
};

/// Regressor rows are linearly dependent beyond tolerance; the data cannot
/// identify the model (constant or all-zero signals, insufficient excitation).
class RankDeficient : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// A baseline coefficient quantity is too close to zero to normalize against.
class BaselineDegenerate : public Error {
public:
  using Error::Error;
};

class NotLocalized : public Error {
public:
  using Error::Error;
};

class TooFewRuns : public Error {
public:
  using Error::Error;
};

class CalibrationFailed : public Error {
public:
  using Error::Error;
};

/// Configuration file missing, unparsable, or holding an invalid field value.
class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace subvarx
