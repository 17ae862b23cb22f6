#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hems {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value. Maps to CLI exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Input is well-formed but cannot be used (rank deficiency, divergence,
/// gaps, missing history). Maps to CLI exit code 2.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class MissingHistoryError : public DegenerateInputError {
public:
    using DegenerateInputError::DegenerateInputError;
};

class RankDeficiencyError : public DegenerateInputError {
public:
    RankDeficiencyError(const std::string& what, std::vector<std::string> columns)
        : DegenerateInputError(what), columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

class InsufficientDataError : public DegenerateInputError {
public:
    using DegenerateInputError::DegenerateInputError;
};

class DivergenceError : public DegenerateInputError {
public:
    DivergenceError(const std::string& what, int iteration)
        : DegenerateInputError(what), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// Malformed file content; `line` is 1-based, 0 when unknown.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line)
        : ValidationError(what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class PathError : public ValidationError {
public:
    PathError(const std::string& what, std::string path)
        : ValidationError(what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace hems
