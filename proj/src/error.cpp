#include "shr/error.hpp"

namespace shr {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::ArityMismatch: return "arity mismatch";
    case ErrorCode::UnknownNode: return "unknown node";
    case ErrorCode::LabelMismatch: return "label mismatch";
    case ErrorCode::StaleTransition: return "stale transition";
    case ErrorCode::IndexOutOfRange: return "index out of range";
    case ErrorCode::InvalidArgument: return "invalid argument";
    }
    return "unknown error";
}

} // namespace shr
