#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace derham {

enum class ErrorCode {
    AmbientMismatch,
    IndexOutOfRange,
    ZeroDivisor,
    SingularChange,
    ZeroInput,
    NotZeroDimensional,
    UnitIdeal,
    NotHomogeneous,
    WrongHeight,
    NoGoodChangeFound,
    CompositeNotZero,
    NonCommuting,
    NoStabilization,
    UnknownClass,
    SyntaxError,
    UnknownVariable,
    InvalidArgument,
};

inline const char *to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ZeroDivisor: return "ZeroDivisor";
    case ErrorCode::SingularChange: return "SingularChange";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::NotZeroDimensional: return "NotZeroDimensional";
    case ErrorCode::UnitIdeal: return "UnitIdeal";
    case ErrorCode::NotHomogeneous: return "NotHomogeneous";
    case ErrorCode::WrongHeight: return "WrongHeight";
    case ErrorCode::NoGoodChangeFound: return "NoGoodChangeFound";
    case ErrorCode::CompositeNotZero: return "CompositeNotZero";
    case ErrorCode::NonCommuting: return "NonCommuting";
    case ErrorCode::NoStabilization: return "NoStabilization";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

class ParseError : public Error {
  public:
    ParseError(ErrorCode code, const std::string &what, std::size_t position)
        : Error(code, what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

} // namespace derham
