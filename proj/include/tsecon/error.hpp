#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsecon {

enum class ErrorCode {
    RankDeficient,
    DimensionMismatch,
    BandwidthTooLarge,
    NotPositiveDefinite,
    DegenerateFit,
    GapInYears,
    NonNumericCell,
    DuplicateColumn,
    EmptyFile,
    SeriesTooShort,
    BreakOutOfRange,
    AlignmentMismatch,
    DegenerateRegression,
    TrimOutOfRange,
    InsufficientSample,
    InvalidArgument,
    UnitRootDenominator,
    ZeroVariance,
    InvalidSpec,
    MalformedExpectations,
    ConfigError,
    IoFailure,
    NetworkUnavailable,
    HttpStatus,
    MalformedPayload,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. Every failure carries a machine-readable code so
/// the CLI can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tsecon
