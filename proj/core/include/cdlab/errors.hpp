#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdlab {

// Base of every error the library throws. Numerical failures derive from
// NumericalError so the runner can map them to a distinct exit code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

class NoConvergence : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// Orthogonalization pivot collapsed: the measure is (numerically) carried by
// too few points for the requested polynomial degree.
class RankDeficient : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class EmptyMeasure : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class NonpositiveWeight : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class NonfiniteNode : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class DominationViolated : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

// Kernel diagonal numerically zero at the requested point.
class BaseLocus : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class DenominatorVanishes : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace cdlab
