#pragma once

#include <stdexcept>
#include <string>

namespace manifit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
public:
  using Error::Error;
};

class InvalidInput : public Error
{
public:
  using Error::Error;
};

/// No sample (or no positively weighted sample) in the ball around a point.
class EmptyNeighborhood : public Error
{
public:
  using Error::Error;
};

class NumericalError : public Error
{
public:
  using Error::Error;
};

/// The km17 weights theta(sqrt(f_i) / 2r) vanished for every neighbor.
class AllWeightsZero : public Error
{
public:
  using Error::Error;
};

/// A finite-difference stencil left the region where the field is defined.
class StencilEscape : public Error
{
public:
  using Error::Error;
};

class TubeExceedsReach : public Error
{
public:
  using Error::Error;
};

class EmptySetError : public Error
{
public:
  using Error::Error;
};

/// Invalid experiment configuration. Carries the offending line when known.
class ConfigError : public Error
{
public:
  explicit ConfigError(const std::string& what, int line = -1)
    : Error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what)
    , line_(line)
  {}

  int line() const { return line_; }

private:
  int line_;
};

/// Malformed point file. Row and column are 1-based; 0 means "not applicable".
class ParseError : public Error
{
public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
    : Error("row " + std::to_string(row) + ", column " + std::to_string(column) +
            ": " + what)
    , row_(row)
    , column_(column)
  {}

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

private:
  std::size_t row_;
  std::size_t column_;
};

} // namespace manifit
