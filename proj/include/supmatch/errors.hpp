#pragma once

#include <stdexcept>
#include <string>

namespace supmatch {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A required input file is missing or cannot be parsed at all.
struct IngestionError : Error {
  using Error::Error;
};

// Input files parse but violate a corpus-level constraint (dangling ids,
// duplicate ids, overlapping splits, ...).
struct ValidationError : Error {
  using Error::Error;
};

// An argument is outside its documented domain.
struct ParameterError : Error {
  using Error::Error;
};

// An experiment/config JSON is malformed; message carries the field path.
struct ConfigError : Error {
  using Error::Error;
};

// An API was used out of order (e.g. backward without forward).
struct UsageError : Error {
  using Error::Error;
};

}  // namespace supmatch
