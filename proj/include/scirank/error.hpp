#pragma once

#include <stdexcept>
#include <string>

namespace scirank {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (k < 1, empty query, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Input file could not be read or did not parse.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what), line_(line) {}

    /// 1-based line number of the offending input, 0 when not line-specific.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A doc id referenced by a result list is not present in the corpus.
class UnknownDocument : public Error {
public:
    explicit UnknownDocument(const std::string& id)
        : Error("unknown document id: " + id), id_(id) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

} // namespace scirank
