#pragma once

#include <stdexcept>
#include <string>

namespace su {

/// Raised for malformed user input: out-of-range IDs, bad parameters, unparseable files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace su
