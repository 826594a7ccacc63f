#pragma once

#include <stdexcept>
#include <string>

namespace qsvm {

/// Base class for every error raised by the library. `exit_code()` is the
/// process exit status the CLI reports for this error family.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 2; }
};

// Caller-side mistakes: bad flags, bad config values, invalid arguments.
class ArgumentError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 1; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 1; }
};

// Data-side failures.
class ResourceError : public Error { public: using Error::Error; };
class DataError : public Error { public: using Error::Error; };
class TrainingError : public Error { public: using Error::Error; };
class GenerationError : public Error { public: using Error::Error; };
class UnsupportedTermError : public Error { public: using Error::Error; };

/// Malformed input file. `row()` is the 1-based line number of the offending
/// row, counting the header as line 1.
class ParseError : public DataError {
public:
    enum class Kind { MalformedRow, BadNumber, NonFinite, BadHeader };

    ParseError(Kind kind, const std::string& what, std::size_t row)
        : DataError(what), kind_(kind), row_(row) {}
    Kind kind() const noexcept { return kind_; }
    std::size_t row() const noexcept { return row_; }

private:
    Kind kind_;
    std::size_t row_;
};

}  // namespace qsvm
