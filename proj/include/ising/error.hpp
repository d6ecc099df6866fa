#pragma once

#include <stdexcept>
#include <string>

namespace ising {

enum class ErrorCode {
    InvalidInput,
    DisconnectedSet,
    DisconnectedConditionSet,
    TooLarge,
    NotZeroField,
    NotPlanar,
    NumericalFailure,
    SingularMatrix,
    InvalidDecomposition,
    NotBiconnected,
    Not3Connected,
    NotK5Free,
    CoverageError,
    InternalError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ising
