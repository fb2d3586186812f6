#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace logstar {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A product would create a lambda monomial above the configured weight cap.
class TruncationOverflow : public Error {
public:
    using Error::Error;
};

/// Polynomial degree above the truncation order of an operator or engine.
class DegreeCapExceeded : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Malformed algebra or graph description (bad JSON shape, bad indices).
class InputError : public Error {
public:
    using Error::Error;
};

class AntisymmetryViolation : public Error {
public:
    AntisymmetryViolation(int i, int j, int k, const std::string& detail)
        : Error(detail), witness{i, j, k} {}
    std::array<int, 3> witness;
};

class JacobiViolation : public Error {
public:
    JacobiViolation(int i, int j, int k, int l, const std::string& detail)
        : Error(detail), witness{i, j, k, l} {}
    std::array<int, 4> witness;
};

/// Floating point evaluation produced a non-finite number.
class NumericOverflow : public Error {
public:
    using Error::Error;
};

} // namespace logstar
