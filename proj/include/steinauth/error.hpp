#pragma once

#include <stdexcept>
#include <string>

namespace steinauth {

/// Failure categories. The numeric values double as CLI exit statuses.
enum class ErrorKind {
    Usage = 1,
    Admissibility = 2,
    Undecided = 3,
    Verification = 4,
    Parameter = 5,
    Structural = 6,
    Parse = 7,
    Io = 8,
    NotAuthentic = 9,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace steinauth
