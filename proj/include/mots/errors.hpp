#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mots {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidBox : public Error {
 public:
  using Error::Error;
};

class DegenerateState : public Error {
 public:
  using Error::Error;
};

class MissingEmbedding : public Error {
 public:
  using Error::Error;
};

class EmptySequence : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. line() is 1-based, 0 when not line-oriented.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mots
