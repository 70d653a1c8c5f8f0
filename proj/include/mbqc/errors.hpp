#pragma once

#include <stdexcept>
#include <string>

namespace mbqc {

// Qubit count or amplitude vector of the wrong size.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Qubit index out of range or duplicated.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Operation not allowed in the current measurement state (re-measurement,
// unmeasured control bit, pattern ordering violation).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed graph, flow or pattern.
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad user-facing argument (unknown gadget, invalid oracle string, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mbqc
