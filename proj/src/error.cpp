#include "ising/error.hpp"

namespace ising {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DisconnectedSet: return "DisconnectedSet";
    case ErrorCode::DisconnectedConditionSet: return "DisconnectedConditionSet";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotZeroField: return "NotZeroField";
    case ErrorCode::NotPlanar: return "NotPlanar";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorCode::NotBiconnected: return "NotBiconnected";
    case ErrorCode::Not3Connected: return "Not3Connected";
    case ErrorCode::NotK5Free: return "NotK5Free";
    case ErrorCode::CoverageError: return "CoverageError";
    case ErrorCode::InternalError: return "InternalError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace ising
