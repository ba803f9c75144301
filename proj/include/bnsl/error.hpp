#ifndef BNSL_ERROR_HPP
#define BNSL_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bnsl {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), m_line(line) {}

    std::size_t line() const { return m_line; }

private:
    std::size_t m_line;
};

// Out-of-range argument supplied by the caller (ess <= 0, percent > 99, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

class InvalidFamily : public Error {
public:
    using Error::Error;
};

class MalformedTable : public Error {
public:
    using Error::Error;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

}  // namespace bnsl

#endif  // BNSL_ERROR_HPP
