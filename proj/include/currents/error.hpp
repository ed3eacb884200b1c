#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace currents {

enum class ErrorCode {
    DegenerateSimplex,
    NonUniformArity,
    IndexOutOfRange,
    DimensionZero,
    DimensionMismatch,
    EmptyRadii,
    UnsupportedOrder,
    UnsupportedDimension,
    NonFiniteValue,
    GridMassNotAvoidable,
    BoxDegenerate,
    DuplicateCenters,
    EmptyAfterFilter,
    NonFiniteEntry,
    KTooLarge,
    NotAManifoldChain,
    DirichletOnClosed,
    NonManifoldEdge,
    LPUnbounded,
    LPStall,
    TooFewSegments,
    EpsOutOfRange,
    HolesOverlap,
    BadRadius,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every module of the library.
class CurrentsError : public std::runtime_error {
public:
    CurrentsError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what)
{
    throw CurrentsError(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what)
{
    if (!condition) fail(code, what);
}

} // namespace currents
