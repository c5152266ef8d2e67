/**
 * @file error.hpp
 * @brief Exception types shared by the solver library and the bench CLI.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tfode {

/// Invalid problem, selector, solver or bench configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function was evaluated outside its domain (negative base of a
/// fractional power, gamma pole, ...). `offset`/`length` locate the
/// offending source span when the error comes from a parsed expression.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what, std::size_t offset = npos, std::size_t length = 0)
      : std::domain_error(what), offset_(offset), length_(length) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }
  [[nodiscard]] std::size_t length() const noexcept { return length_; }
  [[nodiscard]] bool has_span() const noexcept { return offset_ != npos; }

 private:
  std::size_t offset_;
  std::size_t length_;
};

/// Series or iteration did not reach its tolerance within the allowed budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time step could not be completed. `step` is the index n+1 of the value
/// being computed.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  [[nodiscard]] long step() const noexcept { return step_; }

 private:
  long step_;
};

/// The state left the admissible range (non-finite or |x| above the guard).
class DivergenceError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Expression syntax error at byte `offset` of the source.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::invalid_argument(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace tfode
