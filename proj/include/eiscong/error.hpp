#pragma once

#include <stdexcept>
#include <string>

namespace eiscong {

/// Stable machine-readable error categories. The CLI reports these verbatim
/// as "error_kind".
enum class ErrorKind {
    structural,      // mismatched fields, malformed objects
    domain,          // input outside the operation's domain
    resource,        // configured bound exceeded
    capability,      // unsupported degree / missing unit data
    configuration,   // representative choices violate a precondition
    range,           // coefficient table too shallow
    parse,
    validation,
    incomplete_data,
    valuation,       // element not integral at the requested prime
    usage,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::structural: return "structural";
    case ErrorKind::domain: return "domain";
    case ErrorKind::resource: return "resource";
    case ErrorKind::capability: return "capability";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::range: return "range";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::incomplete_data: return "incomplete_data";
    case ErrorKind::valuation: return "valuation";
    case ErrorKind::usage: return "usage";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

} // namespace eiscong
