#pragma once

#include <stdexcept>
#include <string>

namespace ntw {

// Thrown when an iterative scheme fails to converge or a solution leaves its
// admissible range. Maps to CLI exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for invalid configuration or argument values. Maps to exit code 2.
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown for file-system problems. Maps to exit code 4.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ntw
