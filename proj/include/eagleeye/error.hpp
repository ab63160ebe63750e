#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eagleeye {

enum class ErrorCode {
    DimensionMismatch,
    NonFiniteInput,
    KMaxTooLarge,
    EmptyDataset,
    InvalidConfig,
    DomainError,
    UnreachableExtremeness,
    EmptySample,
    EmptyInput,
    NonTermination,
    DivisionByZero,
    ZeroAnomaly,
    ZeroBackground,
    SpecError,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Process exit code associated with an error: 2 for input/validation
// problems, 3 for an unreachable extremeness, 4 for internal failures.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace eagleeye
