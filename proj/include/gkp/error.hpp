#pragma once

#include <stdexcept>
#include <string>

namespace gkp {

enum class ErrorKind {
  InvalidDimension,
  InvalidParameter,
  Truncation,
  ZeroProbability,
  UndefinedMetric,
  NumericalConsistency,
  DegenerateChannel,
  ScheduleOverflow,
  Model,
  InternalInvariant,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gkp
