#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace poet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid residue, empty sequence or otherwise malformed sequence text.
class SequenceError : public Error {
 public:
  using Error::Error;
};

/// Configuration that violates a documented precondition.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace poet
