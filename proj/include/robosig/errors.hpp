#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace robosig {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// No usable (pen-down) samples.
class EmptySignatureError : public Error {
public:
    using Error::Error;
};

/// Non-finite or otherwise unconvertible values.
class ConversionError : public Error {
public:
    using Error::Error;
};

/// A point the arm cannot reach. `index` is the offending sample.
class WorkspaceError : public Error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit WorkspaceError(const std::string& what, std::size_t index = npos)
        : Error(index != npos ? what + " at sample " + std::to_string(index) : what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Violated precondition on shapes, lengths or configuration.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Evaluation protocol cannot be run (no eligible users, missing class).
class ProtocolError : public Error {
public:
    using Error::Error;
};

}  // namespace robosig
