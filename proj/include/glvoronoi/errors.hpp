#pragma once

#include <stdexcept>
#include <string>

namespace glv {

/// Argument outside the documented domain of an operation.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested at (or within the pole tolerance of) a pole.
class pole_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A coefficient source was asked for a tuple it does not store.
class insufficient_data : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Direct enumeration would exceed the configured work budget.
class budget_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based line number.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  [[nodiscard]] int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace glv
