#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperstore {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A point lies on a plane (|residual| <= epsilon), so its sign is undefined.
class IncidentPoint : public Error {
public:
    IncidentPoint(const std::string& what, std::size_t plane)
        : Error(what), plane_(plane) {}
    std::size_t plane() const noexcept { return plane_; }

private:
    std::size_t plane_;
};

/// No plane of the form 1 + alpha.x = 0 satisfies the requested constraints.
class InconsistentSystem : public Error {
public:
    using Error::Error;
};

class DuplicatePoint : public Error {
public:
    using Error::Error;
};

/// Shift/retry budget for fitting a separating plane ran out.
class GeometryExhausted : public Error {
public:
    using Error::Error;
};

class Overflow : public Error {
public:
    using Error::Error;
};

class NotADigitPoint : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace hyperstore
