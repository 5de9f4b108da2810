#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pae {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidFormat : public Error {
 public:
  using Error::Error;
};

class NotAnInteger : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed network document.
class ParseError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string cases, std::uint64_t budget)
      : Error("enumeration of " + cases + " cases exceeds the case budget of " +
              std::to_string(budget)),
        cases_(std::move(cases)),
        budget_(budget) {}

  // Decimal, since the count can exceed 64 bits.
  const std::string& cases() const { return cases_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::string cases_;
  std::uint64_t budget_;
};

}  // namespace pae
