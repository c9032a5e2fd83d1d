#pragma once

#include <stdexcept>
#include <string>

namespace roughdrop {

// Bad input or violated precondition. Maps to CLI exit status 2.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// The problem as posed has no admissible solution. Exit status 3.
class Infeasible : public std::runtime_error {
 public:
  explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency check failed. Exit status 4.
class InvariantBreach : public std::logic_error {
 public:
  explicit InvariantBreach(const std::string& what) : std::logic_error(what) {}
};

}  // namespace roughdrop
