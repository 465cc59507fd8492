#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dadim {

// Every failure mode the library can report. The numeric values double as the
// CLI exit codes, so do not reorder existing entries.
enum class ErrorCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kParse = 4,
  kDepthExceeded = 10,
  kNotMinimal = 11,
  kEmptySet = 12,
  kBoundExceeded = 13,
  kBlowupExceeded = 14,
  kCoverGap = 15,
  kWitnessMismatch = 16,
  kNotAnAction = 20,
  kSizeExceeded = 21,
  kNotClosed = 22,
  kNotFree = 23,
  kGroupoidAxiom = 24,
  kSeparationViolation = 30,
  kDiameterViolation = 31,
  kTooLarge = 32,
  kEmptySkeleton = 40,
  kNotInComplex = 41,
  kNoFiniteS = 42,
  kMissingSample = 43,
  kConditionViolated = 44,
  kDepthInsufficient = 45,
  kEquivarianceTooWeak = 46,
  kWitnessInsufficient = 50,
  kPropagationEscapesColor = 51,
  kTowerInvalid = 52,
  kSupportViolation = 53,
  kGroupoidMismatch = 60,
  kSupportLeak = 61,
  kBoundViolated = 62,
  kHashMismatch = 70,
  kGoldenDiff = 71,
  kConfiguration = 72,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace dadim
