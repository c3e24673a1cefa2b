#pragma once

#include <stdexcept>
#include <string>

namespace lenscat {

// Base for all toolkit errors so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text; `line` is 1-based, 0 when unknown.
struct ParseError : Error {
    ParseError(std::size_t line_, const std::string& what_)
        : Error(what_), line(line_) {}
    std::size_t line = 0;
};

// A name does not resolve to an object/arrow/block.
struct ReferenceError : Error {
    using Error::Error;
};

// An operation's stated precondition does not hold.
struct PreconditionError : Error {
    using Error::Error;
};

// An enumeration or search would exceed its configured bound.
struct BoundExceededError : Error {
    using Error::Error;
};

// A constructed value cannot be assembled (duplicate ids, a put rule
// that fails its laws, ...).
struct ConstructionError : Error {
    using Error::Error;
};

} // namespace lenscat
