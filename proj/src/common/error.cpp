#include "twinloop/common/error.hpp"

namespace twinloop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateTag: return "DuplicateTag";
    case ErrorCode::kOverlappingCubes: return "OverlappingCubes";
    case ErrorCode::kUnreachableHomePose: return "UnreachableHomePose";
    case ErrorCode::kUnknownTag: return "UnknownTag";
    case ErrorCode::kInvalidWorld: return "InvalidWorld";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUndeclaredType: return "UndeclaredType";
    case ErrorCode::kUndeclaredVariable: return "UndeclaredVariable";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kUnknownPredicate: return "UnknownPredicate";
    case ErrorCode::kUnknownObjectType: return "UnknownObjectType";
    case ErrorCode::kUnknownAction: return "UnknownAction";
    case ErrorCode::kUnsupportedFeature: return "UnsupportedFeature";
    case ErrorCode::kPreconditionUnsatisfied: return "PreconditionUnsatisfied";
    case ErrorCode::kTypeError: return "TypeError";
    case ErrorCode::kUnsolvable: return "Unsolvable";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kAmbiguousStacking: return "AmbiguousStacking";
    case ErrorCode::kEmptyGoal: return "EmptyGoal";
    case ErrorCode::kUnreachableTarget: return "UnreachableTarget";
    case ErrorCode::kJointLimitViolation: return "JointLimitViolation";
    case ErrorCode::kOutOfWorkspace: return "OutOfWorkspace";
    case ErrorCode::kStaleData: return "StaleData";
    case ErrorCode::kServiceUnavailable: return "ServiceUnavailable";
    case ErrorCode::kInvalidTransition: return "InvalidTransition";
    case ErrorCode::kExecutionAborted: return "ExecutionAborted";
    case ErrorCode::kPortInUse: return "PortInUse";
    case ErrorCode::kMalformedFrame: return "MalformedFrame";
    case ErrorCode::kUnknownService: return "UnknownService";
    case ErrorCode::kBadArguments: return "BadArguments";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMalformedLog: return "MalformedLog";
    case ErrorCode::kNoCompletedSessions: return "NoCompletedSessions";
    case ErrorCode::kRangeError: return "RangeError";
  }
  return "Unknown";
}

}  // namespace twinloop
