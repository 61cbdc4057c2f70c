// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loas {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A variable of a rule does not occur in any positive body literal.
class SafetyError : public Error {
public:
    SafetyError(std::size_t rule_index, const std::string& variable)
        : Error("rule " + std::to_string(rule_index) + " is unsafe: variable " + variable +
                " does not occur in a positive body literal"),
          rule_index_(rule_index), variable_(variable) {}

    std::size_t rule_index() const noexcept { return rule_index_; }
    const std::string& variable() const noexcept { return variable_; }

private:
    std::size_t rule_index_;
    std::string variable_;
};

class GroundingError : public Error {
public:
    using Error::Error;
};

/// Raised when derived atoms exceed the function-term nesting bound.
class NonFiniteGrounding : public GroundingError {
public:
    using GroundingError::GroundingError;
};

class NotGround : public Error {
public:
    using Error::Error;
};

class SearchSpaceExplosion : public Error {
public:
    using Error::Error;
};

/// Malformed learning task (inconsistent examples, dangling ordering ids, ...).
class TaskError : public Error {
public:
    using Error::Error;
};

class ReservedPredicateClash : public TaskError {
public:
    using TaskError::TaskError;
};

class MalformedMetaModel : public Error {
public:
    using Error::Error;
};

class ExternalSolverError : public Error {
public:
    ExternalSolverError(int exit_code, std::string transcript, const std::string& message)
        : Error(message), exit_code_(exit_code), transcript_(std::move(transcript)) {}

    int exit_code() const noexcept { return exit_code_; }
    const std::string& transcript() const noexcept { return transcript_; }

private:
    int exit_code_;
    std::string transcript_;
};

class IterationLimitExceeded : public Error {
public:
    using Error::Error;
};

class SpaceTooLarge : public Error {
public:
    using Error::Error;
};

class ExhaustedSampling : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A wall-clock budget ran out before the search finished.
class Timeout : public Error {
public:
    using Error::Error;
};

} // namespace loas
