#pragma once

#include <stdexcept>
#include <string>

namespace cgtree {

// Malformed or unusable input data (bad CSV cell, single-class training set, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or argument combination.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Internal solver failure: infeasible master, numerical breakdown. Indicates a bug.
class SolverError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cgtree
