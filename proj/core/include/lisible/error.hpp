#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lisible {

/// Root of every exception the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller-supplied data or arguments are wrong. The CLI maps these to exit code 1.
class InputError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. `line` is 1-based (0 when unknown); `offset` is a
/// 0-based character offset for single-line inputs such as bracketed trees.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t offset = 0)
        : InputError(what), line_(line), offset_(offset) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t line_;
    std::size_t offset_;
};

class StructureError : public InputError { public: using InputError::InputError; };
class FormatError : public InputError { public: using InputError::InputError; };
class ParameterError : public InputError { public: using InputError::InputError; };
class DegenerateError : public InputError { public: using InputError::InputError; };
class ValidationError : public InputError { public: using InputError::InputError; };
class NotFoundError : public InputError { public: using InputError::InputError; };
class ConflictError : public InputError { public: using InputError::InputError; };
class VersionError : public InputError { public: using InputError::InputError; };
class CorruptionError : public InputError { public: using InputError::InputError; };

/// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t epoch) : Error(what), epoch_(epoch) {}
    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

}  // namespace lisible
