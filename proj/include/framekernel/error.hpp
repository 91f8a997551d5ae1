#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace framekernel {

enum class ErrorCode {
    InvalidMatrix,
    InvalidArgument,
    InvalidIndex,
    DimensionMismatch,
    NotPositiveSemidefinite,
    ZeroSpan,
    NotAFrame,
};

inline constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::ZeroSpan: return "ZeroSpan";
    case ErrorCode::NotAFrame: return "NotAFrame";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const char* what) {
    if (!condition) {
        fail(code, what);
    }
}

}  // namespace detail
}  // namespace framekernel
