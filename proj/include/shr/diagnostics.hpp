#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace shr {

/// Position inside a parsed text. Lines and columns are 1-based; offset is
/// the 0-based byte index. A zero line means "no location" (semantic
/// diagnostics produced outside the parser).
struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t offset = 0;
};

struct Diagnostic {
    std::string code;    // stable machine-readable code, e.g. "ACTION_ARITY_CLASH"
    std::string message; // human-readable explanation
    SourceSpan span;

    bool has_location() const { return span.line > 0; }
};

std::string format_diagnostic(const Diagnostic& d);

} // namespace shr
