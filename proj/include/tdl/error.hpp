#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tdl {

enum class ErrorCode {
    ZeroInverse,
    ZeroPolynomial,
    TooLarge,
    UnsupportedKind,
    BadReduction,
    PrimeClash,
    UnknownPrime,
    InvalidArgument,
    NotAGroup,
    Parse,
    Io,
};

constexpr std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::BadReduction: return "BadReduction";
    case ErrorCode::PrimeClash: return "PrimeClash";
    case ErrorCode::UnknownPrime: return "UnknownPrime";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace tdl
