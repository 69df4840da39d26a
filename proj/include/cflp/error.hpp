#pragma once

#include <stdexcept>
#include <string>

namespace cflp {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    InfeasibleAssignment,
    InfeasibleParams,
    TotalCapacity,
    UnboundedSupport,
    SizeLimit,
    Numerical,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message)
{
    throw Error(kind, message);
}

inline void require(bool ok, ErrorKind kind, const std::string& message)
{
    if (!ok)
        throw Error(kind, message);
}

}  // namespace cflp
