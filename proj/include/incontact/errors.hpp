#ifndef INCONTACT_ERRORS_HPP
#define INCONTACT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace incontact {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mismatched grid dimensions, wrong array lengths, and similar shape problems.
class StructuralError : public Error {
public:
    using Error::Error;
};

// A baseline grid containing zero or negative entries.
class InvalidBaselineError : public Error {
public:
    using Error::Error;
};

// An argument outside the mathematically valid range of an operation
// (e.g. a push distance past the point where contact is lost).
class DomainError : public Error {
public:
    using Error::Error;
};

// Too few data points to run a fit; carries the label of the offending track.
class InsufficientDataError : public Error {
public:
    InsufficientDataError(const std::string& label, const std::string& what_arg)
        : Error(what_arg), label_(label) {}
    const std::string& label() const { return label_; }

private:
    std::string label_;
};

// Evaluation requested over zero trials.
class EmptyEvaluationError : public Error {
public:
    using Error::Error;
};

// An operation that requires robot motion was invoked on a window without any.
class NotApplicableError : public Error {
public:
    using Error::Error;
};

// Diagnostics raised while reading trial logs and other text inputs.
class ParseError : public Error {
public:
    enum class Kind {
        UnsupportedVersion,
        MissingRecord,
        DimensionMismatch,
        TruncatedRecord,
        NonMonotoneTime,
        BadNumber,
        BadRecord,
    };

    ParseError(Kind kind, std::size_t line, const std::string& what_arg)
        : Error(what_arg), kind_(kind), line_(line) {}

    Kind kind() const { return kind_; }
    std::size_t line() const { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

} // namespace incontact

#endif
