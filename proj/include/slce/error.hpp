#pragma once

#include <stdexcept>
#include <string>

namespace slce {

// Malformed or inconsistent user input (files, labels, configuration).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced a non-finite cost or parameter.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slce
