#pragma once

#include <stdexcept>
#include <string>

namespace echo {

// Invalid arguments to a library operation (bad graph parameters, index out
// of range, mismatched populations).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A run configuration that fails validation or cannot be parsed.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure talking to a text backend (network, HTTP status, malformed reply).
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Remote backend selected but no API key is available.
class CredentialsError : public TransportError {
 public:
  using TransportError::TransportError;
};

// Model output that does not carry a usable BELIEF/OPINION pair.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failure while reading or writing artifacts.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace echo
