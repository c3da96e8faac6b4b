#pragma once

#include <stdexcept>
#include <string>

namespace kdiff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// field width out of range or too small for the requested operation
class WidthError : public Error {
 public:
  using Error::Error;
};

// operand lengths or word counts that do not line up
class ShapeError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// a map input outside the function's domain, or an unsorted input in validation mode
class DomainError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

class ParamError : public Error {
 public:
  using Error::Error;
};

}  // namespace kdiff
