#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidModel : public Error {
public:
    using Error::Error;
};

/// Precondition of a resource formula or lemma check does not hold.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Requested computation exceeds a configured size cap (qubits, dimension).
class ResourceError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class FitError : public Error {
public:
    using Error::Error;
};

} // namespace qspec
