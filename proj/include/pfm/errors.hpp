#pragma once

#include <stdexcept>
#include <string>

namespace pfm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vector lengths or matrix shapes that do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid argument or parameter combination.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Objective produced a non-finite value, or was called outside its domain.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (CSV, schema, datasets).
class DataError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace pfm
