#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cliqueforest {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the model domain of a map, or an unsupported manifold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An expression that should denote an increasing diffeomorphism does not.
class InvariantBreach : public Error {
 public:
  InvariantBreach(const std::string& what, double where)
      : Error(what), location_(where) {}
  explicit InvariantBreach(const std::string& what) : Error(what) {}

  double location() const noexcept { return location_; }

 private:
  double location_ = 0.0;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input outside the commutation argument (identity maps fed to a commutation graph).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

}  // namespace cliqueforest
