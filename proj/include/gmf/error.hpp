#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gmf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RingMismatchError : Error {
    RingMismatchError() : Error("elements belong to different rings") {}
};

struct UnknownVariableError : Error {
    explicit UnknownVariableError(const std::string& name)
        : Error("unknown variable '" + name + "'") {}
};

struct DegreeError : Error {
    using Error::Error;
};

// Raised when something needs a Koszul sign for a morphism whose
// cohomological degree is not an integer in scenario units.
struct NonIntegralDegreeError : Error {
    using Error::Error;
};

struct ParseError : Error {
    size_t position;  // byte offset into the parsed text
    ParseError(const std::string& msg, size_t pos)
        : Error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

struct NotInvertibleError : Error {
    using Error::Error;
};

struct NotClosedError : Error {
    using Error::Error;
};

struct CurvatureMismatchError : Error {
    using Error::Error;
};

}  // namespace gmf
