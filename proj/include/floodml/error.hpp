#pragma once

#include <stdexcept>
#include <string>

namespace floodml {

// Every error raised by the library derives from Error so callers can catch
// one type at the pipeline boundary and still report the specific kind.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class AggregationError : public Error {
public:
    using Error::Error;
};

class MergeError : public Error {
public:
    using Error::Error;
};

class EncodingError : public Error {
public:
    using Error::Error;
};

class SplitError : public Error {
public:
    using Error::Error;
};

class ScalerError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

/// Raised when a classifier cannot be fit because the training labels hold a
/// single class.
class DegenerateFitError : public FitError {
public:
    using FitError::FitError;
};

class MetricError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ModelFormatError : public Error {
public:
    using Error::Error;
};

/// Wraps an error raised inside a named pipeline stage.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& message)
        : Error("[" + stage + "] " + message), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

} // namespace floodml
