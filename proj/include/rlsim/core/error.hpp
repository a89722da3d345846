#pragma once

#include <stdexcept>
#include <string>

namespace rlsim {

// All library errors derive from rlsim::Error so callers can catch broadly.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
public:
  InvalidConfig(std::string field, const std::string& what)
      : Error("invalid config: " + field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

class IllegalMove : public Error {
public:
  explicit IllegalMove(const std::string& reason) : Error("illegal move: " + reason) {}
};

class TerminalState : public Error {
public:
  TerminalState() : Error("game is already over") {}
};

class DimensionMismatch : public Error {
public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

class TrainingDivergence : public Error {
public:
  using Error::Error;
};

class LengthMismatch : public Error {
public:
  using Error::Error;
};

class UndefinedCorrelation : public Error {
public:
  using Error::Error;
};

class InfeasibleK : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace rlsim
