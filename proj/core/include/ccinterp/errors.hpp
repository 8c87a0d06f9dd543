#pragma once

#include <exception>
#include <string>
#include <utility>

namespace ccinterp {

/// Base class for all library errors. `kind()` is a stable identifier that
/// the CLI uses to pick an exit code and that tests match on.
class Error : public std::exception {
 public:
  Error(std::string kind, const std::string& what)
      : kind_(std::move(kind)), message_(kind_ + ": " + what) {}

  const char* what() const noexcept override { return message_.c_str(); }
  const std::string& kind() const noexcept { return kind_; }

  /// Prefixes the message with context (e.g. the failing node) while keeping
  /// the dynamic type, so `catch (Error& e) { e.add_context(..); throw; }`
  /// works.
  void add_context(const std::string& context) {
    message_ = kind_ + ": [" + context + "] " + message_.substr(kind_.size() + 2);
  }

  /// True for failures of a numerical procedure (as opposed to bad input).
  virtual bool numerical() const noexcept { return false; }

 private:
  std::string kind_;
  std::string message_;
};

#define CCINTERP_DEFINE_ERROR(Name, is_numerical)                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {}  \
    bool numerical() const noexcept override { return is_numerical; } \
  };

// Input and format errors.
CCINTERP_DEFINE_ERROR(ParseError, false)
CCINTERP_DEFINE_ERROR(DegenerateGeometry, false)
CCINTERP_DEFINE_ERROR(ShapeMismatch, false)
CCINTERP_DEFINE_ERROR(IoFailure, false)
CCINTERP_DEFINE_ERROR(CorruptContainer, false)
CCINTERP_DEFINE_ERROR(VersionMismatch, false)
CCINTERP_DEFINE_ERROR(InvariantViolation, false)
CCINTERP_DEFINE_ERROR(InconsistentSet, false)
CCINTERP_DEFINE_ERROR(InvalidArgument, false)
CCINTERP_DEFINE_ERROR(TooLarge, false)
CCINTERP_DEFINE_ERROR(ZeroReference, false)
CCINTERP_DEFINE_ERROR(NonpositiveError, false)

// Numerical failures.
CCINTERP_DEFINE_ERROR(LinearDependence, true)
CCINTERP_DEFINE_ERROR(ScfNotConverged, true)
CCINTERP_DEFINE_ERROR(GapCollapse, true)
CCINTERP_DEFINE_ERROR(DegenerateDenominator, true)
CCINTERP_DEFINE_ERROR(CcNotConverged, true)
CCINTERP_DEFINE_ERROR(NoCrossingDetected, true)

#undef CCINTERP_DEFINE_ERROR

}  // namespace ccinterp
