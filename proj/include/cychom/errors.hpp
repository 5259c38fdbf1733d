#pragma once

#include <stdexcept>
#include <string>

namespace cychom {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CompositionNotZero : Error {
    using Error::Error;
};
struct NotAChainMap : Error {
    using Error::Error;
};
struct NotAMorphism : Error {
    using Error::Error;
};
struct InvalidWindow : Error {
    using Error::Error;
};
struct WindowTooSmall : Error {
    using Error::Error;
};
struct InvalidComplex : Error {
    using Error::Error;
};
struct NotAugmented : Error {
    using Error::Error;
};
struct NotSimplyConnected : Error {
    using Error::Error;
};
struct UnknownName : Error {
    using Error::Error;
};
struct NotClosed : Error {
    using Error::Error;
};
struct NotInImage : Error {
    using Error::Error;
};

// Spec-file syntax error with source location.
struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_, int column_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " + std::to_string(column_) + ")"),
          line(line_),
          column(column_) {}
};

}  // namespace cychom
