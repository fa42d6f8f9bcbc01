#pragma once

#include <stdexcept>
#include <string>

namespace copulacpd {

enum class ErrorCode {
    NonFinite,
    LengthMismatch,
    TooShort,
    EtaOutOfRange,
    EmptyCloud,
    KTooLarge,
    DimensionMismatch,
    TooFewPoints,
    SegmentTooSmall,
    BadConfig,
    WindowTooLarge,
    UnknownScenario,
    BadParams,
    NonPositivePrice,
    EmptyInput,
    Parse,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library. The code is stable and maps onto CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace copulacpd
