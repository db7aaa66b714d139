#pragma once

#include <stdexcept>
#include <string>

namespace parlab {

// Root of every error raised by the library. The subclasses name the failure
// modes callers are expected to distinguish.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidGraph : public Error {
 public:
  using Error::Error;
};

class CycleDetected : public InvalidGraph {
 public:
  using InvalidGraph::InvalidGraph;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A requested object would exceed a configured size cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// An exhaustive computation was requested beyond its enumeration cap.
class TooLarge : public Error {
 public:
  using Error::Error;
};

class EmptyPopulation : public Error {
 public:
  using Error::Error;
};

class SourceExhausted : public Error {
 public:
  using Error::Error;
};

class UnboundedAlphabet : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace parlab
