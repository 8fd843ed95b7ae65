#pragma once

#include <stdexcept>
#include <string>

namespace lfp {

// Validation failures derive from std::logic_error (bad parameters, violated
// preconditions); numeric or IO failures derive from std::runtime_error. The
// command-line driver maps the former to exit code 2 and the latter to 3.

class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Requested basis frequencies reach or exceed the Nyquist limit of the grid.
class FrequencyOverflow : public DomainError {
public:
  using DomainError::DomainError;
};

class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace lfp
