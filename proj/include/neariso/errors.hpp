// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace neariso {

// Base of everything the library throws. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error { public: using Error::Error; };
class SupportError : public Error { public: using Error::Error; };
class EmptyInput : public Error { public: using Error::Error; };
class NonpositiveWeight : public Error { public: using Error::Error; };
class InvalidBounds : public Error { public: using Error::Error; };
class NonConvergence : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };
class SchemaError : public Error { public: using Error::Error; };

class ParseError : public Error {
public:
    ParseError(const std::string& what, long line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

} // namespace neariso
