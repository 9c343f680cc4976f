#pragma once

#include <stdexcept>
#include <string>

namespace uode {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic misuse: division by zero, gcd of an all-zero list, ...
struct MathError : Error {
    using Error::Error;
};

// Syntax or scoping problem in an .ode/.sol input, with 1-based position.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& what, int line_, int col_)
        : Error(what + " at line " + std::to_string(line_) + ", column " +
                std::to_string(col_)),
          line(line_),
          column(col_) {}
};

// An equation (or system) reduced to 0 = c with c != 0.
struct InconsistentError : Error {
    using Error::Error;
};

}  // namespace uode
