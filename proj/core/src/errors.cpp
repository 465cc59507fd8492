#include "dadim/errors.hpp"

namespace dadim {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kUsage: return "Usage";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kDepthExceeded: return "DepthExceeded";
    case ErrorCode::kNotMinimal: return "NotMinimal";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kBoundExceeded: return "BoundExceeded";
    case ErrorCode::kBlowupExceeded: return "BlowupExceeded";
    case ErrorCode::kCoverGap: return "CoverGap";
    case ErrorCode::kWitnessMismatch: return "WitnessMismatch";
    case ErrorCode::kNotAnAction: return "NotAnAction";
    case ErrorCode::kSizeExceeded: return "SizeExceeded";
    case ErrorCode::kNotClosed: return "NotClosed";
    case ErrorCode::kNotFree: return "NotFree";
    case ErrorCode::kGroupoidAxiom: return "GroupoidAxiom";
    case ErrorCode::kSeparationViolation: return "SeparationViolation";
    case ErrorCode::kDiameterViolation: return "DiameterViolation";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kEmptySkeleton: return "EmptySkeleton";
    case ErrorCode::kNotInComplex: return "NotInComplex";
    case ErrorCode::kNoFiniteS: return "NoFiniteS";
    case ErrorCode::kMissingSample: return "MissingSample";
    case ErrorCode::kConditionViolated: return "ConditionViolated";
    case ErrorCode::kDepthInsufficient: return "DepthInsufficient";
    case ErrorCode::kEquivarianceTooWeak: return "EquivarianceTooWeak";
    case ErrorCode::kWitnessInsufficient: return "WitnessInsufficient";
    case ErrorCode::kPropagationEscapesColor: return "PropagationEscapesColor";
    case ErrorCode::kTowerInvalid: return "TowerInvalid";
    case ErrorCode::kSupportViolation: return "SupportViolation";
    case ErrorCode::kGroupoidMismatch: return "GroupoidMismatch";
    case ErrorCode::kSupportLeak: return "SupportLeak";
    case ErrorCode::kBoundViolated: return "BoundViolated";
    case ErrorCode::kHashMismatch: return "HashMismatch";
    case ErrorCode::kGoldenDiff: return "GoldenDiff";
    case ErrorCode::kConfiguration: return "Configuration";
  }
  return "Unknown";
}

}  // namespace dadim
