#pragma once

#include <stdexcept>
#include <string>

namespace starext {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t column, const std::string& what)
      : Error("syntax error at column " + std::to_string(column) + ": " + what),
        column_(column) {}
  /// Zero-based offset of the offending token in the input text.
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

#define STAREXT_DEFINE_ERROR(Name) \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

STAREXT_DEFINE_ERROR(UnknownVariable);
STAREXT_DEFINE_ERROR(DenominatorVanishes);
STAREXT_DEFINE_ERROR(DivisionByZero);
STAREXT_DEFINE_ERROR(ChartMismatch);
STAREXT_DEFINE_ERROR(NotInvertible);
STAREXT_DEFINE_ERROR(OrderExceeds);
STAREXT_DEFINE_ERROR(NotVectorField);
STAREXT_DEFINE_ERROR(PreconditionViolated);
STAREXT_DEFINE_ERROR(SingularMetric);
STAREXT_DEFINE_ERROR(IntegrabilityError);
STAREXT_DEFINE_ERROR(TruncationTooSmall);
STAREXT_DEFINE_ERROR(NotUnit);
STAREXT_DEFINE_ERROR(LeadingMismatch);
STAREXT_DEFINE_ERROR(Underdetermined);
STAREXT_DEFINE_ERROR(UnrecognizedDenominatorFactor);
STAREXT_DEFINE_ERROR(PivotVanishes);
STAREXT_DEFINE_ERROR(LeviDegenerate);
STAREXT_DEFINE_ERROR(RootDatumMissing);
STAREXT_DEFINE_ERROR(RootDatumInvalid);
STAREXT_DEFINE_ERROR(PipelineDisagreement);
STAREXT_DEFINE_ERROR(SizeLimit);
STAREXT_DEFINE_ERROR(ConfigError);

#undef STAREXT_DEFINE_ERROR

/// Raised by the root construction when a right-hand side is not left-divisible
/// by the expected power of t0. Carries the ν-order at which it happened.
class InternalDivisibilityFailure : public Error {
 public:
  InternalDivisibilityFailure(int order, const std::string& what)
      : Error("left division by t0 failed at order " + std::to_string(order) + ": " + what),
        order_(order) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

/// Hypothesis failure with a human-readable location.
class HypothesisFails : public Error {
 public:
  HypothesisFails(std::string location, const std::string& what)
      : Error(what + " (at " + location + ")"), location_(std::move(location)) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace starext
