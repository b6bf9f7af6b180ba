#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cssr {

// Root of the library error hierarchy. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad argument values or combinations passed to an operation.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Codec configuration rejected before any work starts.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Mismatched frame or vector dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Block or sample index outside its container.
class IndexError : public Error {
public:
    using Error::Error;
};

// Input that cannot be parsed. Carries the byte offset of the failure.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::uint64_t offset)
        : Error(what + " (byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

// Input ended (or continued) where the declared sizes say it should not.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, std::uint64_t expected, std::uint64_t actual)
        : Error(what + ": expected " + std::to_string(expected) + " bytes, got " +
                std::to_string(actual)),
          expected_(expected),
          actual_(actual) {}

    explicit TruncationError(const std::string& what) : Error(what), expected_(0), actual_(0) {}

    std::uint64_t expected() const noexcept { return expected_; }
    std::uint64_t actual() const noexcept { return actual_; }

private:
    std::uint64_t expected_;
    std::uint64_t actual_;
};

// Stream does not start with the expected magic or violates the wire format.
class FormatError : public Error {
public:
    using Error::Error;
};

// Header parsed but violates a stream invariant. Names the offending field.
class CorruptHeaderError : public Error {
public:
    CorruptHeaderError(std::string field, const std::string& what)
        : Error("corrupt header field '" + field + "': " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// File or stream I/O failure.
class IoError : public Error {
public:
    using Error::Error;
};

// Iterative solver exhausted its budget. Carries the last iterate and the
// remaining feasibility/optimality gap so callers can degrade gracefully.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> last_iterate, double gap)
        : Error(what + " (gap " + std::to_string(gap) + ")"),
          last_iterate_(std::move(last_iterate)),
          gap_(gap) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    double gap() const noexcept { return gap_; }

private:
    std::vector<double> last_iterate_;
    double gap_;
};

}  // namespace cssr
