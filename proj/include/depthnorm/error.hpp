#pragma once

#include <stdexcept>
#include <string>

namespace depthnorm {

// Base of every data/validation failure raised by the library. The CLI maps
// these to exit code 1 and UsageError to exit code 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class DegenerateScaleError : public Error {
public:
  using Error::Error;
};

class EmptyResultError : public Error {
public:
  using Error::Error;
};

class PartitionError : public Error {
public:
  using Error::Error;
};

class NumericError : public Error {
public:
  using Error::Error;
};

class UsageError : public Error {
public:
  using Error::Error;
};

}  // namespace depthnorm
