#pragma once

#include <stdexcept>
#include <string>

namespace hawkes {

enum class ErrorCode {
    InvalidConfig,
    InvalidData,
    NonPositiveMark,
    InvalidNormalization,
    MissingMark,
    NonLinearSpec,
    PerReceiverRequired,
    SpecMismatch,
    EmptyComponent,
    NonFiniteLikelihood,
    SingularFisher,
    NonPositiveVariance,
    NotNormalizedLink,
    CapExceeded,
    DomainError,
    EmptySample,
    NonPositiveIncrement,
    TooFewSamples,
    XiTooLarge,
    RequiresRepetitions,
    UnknownExperiment,
    NumericalFailure,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

} // namespace hawkes
