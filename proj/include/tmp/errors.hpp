#ifndef TMP_ERRORS_HPP
#define TMP_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace tmp {

// Base class for all library errors. `kind()` is a stable machine-readable
// tag (used by the CLI for error JSON and exit-code mapping); `what()` is a
// human-readable message with the offending values.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define TMP_DEFINE_ERROR(NAME)                               \
  class NAME : public Error {                                \
   public:                                                   \
    explicit NAME(const std::string& message)                \
        : Error(#NAME, message) {}                           \
  }

TMP_DEFINE_ERROR(InvalidDesign);
TMP_DEFINE_ERROR(DisplacementOutOfRange);
TMP_DEFINE_ERROR(FoldingRatioOutOfRange);
TMP_DEFINE_ERROR(InfeasibleRatio);
TMP_DEFINE_ERROR(ThetaOutOfRange);
TMP_DEFINE_ERROR(SingularConfiguration);
TMP_DEFINE_ERROR(DegenerateCurve);
TMP_DEFINE_ERROR(MismatchedCurves);
TMP_DEFINE_ERROR(DegenerateDeflection);
TMP_DEFINE_ERROR(AllInfeasible);
TMP_DEFINE_ERROR(ComputationError);
TMP_DEFINE_ERROR(ConfigError);

#undef TMP_DEFINE_ERROR

// Thrown when the pre-jump phase never reaches the take-off condition within
// the configured time budget. Carries the strongest tension seen so callers
// can report how close the design came.
class NoTakeoff : public Error {
 public:
  NoTakeoff(const std::string& message, double peak_tension_N)
      : Error("NoTakeoff", message), peak_tension_N_(peak_tension_N) {}
  double peak_tension_N() const { return peak_tension_N_; }

 private:
  double peak_tension_N_ = 0.0;
};

}  // namespace tmp

#endif  // TMP_ERRORS_HPP
