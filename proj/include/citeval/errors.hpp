#pragma once

#include <stdexcept>
#include <string>

namespace citeval {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dataset file could not be read or a record violates the input schema.
class DatasetError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration or precondition violation on user input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A backend could not be reached or refused the request.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// A backend answered with something outside the wire protocol.
class ProtocolError : public BackendError {
 public:
  using BackendError::BackendError;
};

/// Strict table oracle asked about a pair or sentence it has no entry for.
class OracleMissError : public BackendError {
 public:
  using BackendError::BackendError;
};

}  // namespace citeval
