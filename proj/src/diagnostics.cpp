#include "shr/diagnostics.hpp"

#include <sstream>

namespace shr {

std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream out;
    if (d.has_location()) {
        out << d.span.line << ":" << d.span.column << ": ";
    }
    out << "error[" << d.code << "]: " << d.message;
    return out.str();
}

} // namespace shr
