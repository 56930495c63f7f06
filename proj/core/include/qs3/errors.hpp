#pragma once

#include <stdexcept>
#include <string>

namespace qs3 {

// Every failure mode the engine can report. Checks that merely *measure* a
// residual never throw; these are for preconditions the computation cannot
// survive (singular metric, exhausted sampler, rank sitting on a threshold...).
enum class ErrorKind {
  InvalidArgument,
  DomainViolation,
  NonFinite,
  SamplingExhausted,
  SingularMetric,
  DegeneratePlane,
  RankUnstable,
  DimensionMismatch,
  InconsistentC,
  ClassificationContradiction,
  FDUnstable,
  SingularPairing,
  NotHorizontal,
  UnknownModel,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qs3
