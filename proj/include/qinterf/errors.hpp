#pragma once

#include <stdexcept>
#include <string>

namespace qinterf {

// Bad caller-supplied argument (wrong lengths, duplicate qubits, p outside [0,1]).
class ArgumentError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Matrix or gate has the wrong shape for the operation.
class ShapeError : public ArgumentError {
public:
  using ArgumentError::ArgumentError;
};

// A dimension or operator count exceeds the supported cap.
class SizeError : public std::length_error {
public:
  using std::length_error::length_error;
};

// Numerical precondition violated (non-unitary gate, incomplete Kraus set).
class ValidationError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
public:
  IoError(const std::string &path, const std::string &what)
      : std::runtime_error(what + ": " + path), path_(path) {}
  const std::string &path() const noexcept { return path_; }

private:
  std::string path_;
};

} // namespace qinterf
