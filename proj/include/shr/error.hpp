#pragma once

#include <stdexcept>
#include <string>

namespace shr {

enum class ErrorCode {
    ArityMismatch,
    UnknownNode,
    LabelMismatch,
    StaleTransition,
    IndexOutOfRange,
    InvalidArgument,
};

const char* to_string(ErrorCode code);

/// Domain error carrying a stable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace shr
