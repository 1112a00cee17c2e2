#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edrpav {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A design-matrix column has (numerically) zero Euclidean norm, so unit
// normalization is undefined.
class ZeroColumnError : public Error {
public:
    explicit ZeroColumnError(std::size_t column)
        : Error("column " + std::to_string(column) + " has zero Euclidean norm"),
          column(column) {}
    std::size_t column;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

class EmptyGridError : public Error {
public:
    EmptyGridError() : Error("tuning grid is empty") {}
};

class NonpositiveTuningError : public Error {
public:
    explicit NonpositiveTuningError(double value)
        : Error("tuning parameter must be positive, got " + std::to_string(value)) {}
};

// The estimate vector is (numerically) zero; correlation factors and the
// ridge-to-edr tuning map are undefined at such points.
class ZeroEstimateError : public Error {
public:
    ZeroEstimateError() : Error("estimate has zero Euclidean norm") {}
};

class EmptyPathError : public Error {
public:
    using Error::Error;
    EmptyPathError() : Error("solution path has no usable grid points") {}
};

// No grid point satisfies the noise-dependent admissibility lower bound.
class NoAdmissiblePointError : public Error {
public:
    NoAdmissiblePointError() : Error("no grid point satisfies the oracle lower bound") {}
};

// Delimited-file parsing failure with 1-based row/column location.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : Error(what + " (row " + std::to_string(row) + ", column " + std::to_string(column) + ")"),
          row(row),
          column(column) {}
    std::size_t row;
    std::size_t column;
};

class RaggedRowsError : public ParseError {
public:
    RaggedRowsError(std::size_t row, std::size_t expected, std::size_t got)
        : ParseError("row has " + std::to_string(got) + " fields, expected " + std::to_string(expected),
                     row, got) {}
};

class NonNumericCellError : public ParseError {
public:
    NonNumericCellError(std::size_t row, std::size_t column, const std::string& token)
        : ParseError("cell '" + token + "' is not numeric", row, column) {}
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace edrpav
