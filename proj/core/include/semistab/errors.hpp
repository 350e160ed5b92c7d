#pragma once

#include <stdexcept>
#include <string>

namespace semistab {

// Argument outside the mathematical domain of an operation
// (nonpositive radius, invalid window, size mismatch, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A requested computation exceeds a configured resource cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constructed object would break a type invariant (positive potential,
// negative atom weight, ...).
class InvariantViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation called on an input of the wrong class, e.g. a G-delta probe
// on an exponentially stable measure.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed text input: measure files, potential descriptors, study configs.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace semistab
