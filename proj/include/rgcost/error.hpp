#pragma once

#include <stdexcept>
#include <string>

namespace rgcost {

/// Malformed input: files, words, parameters. Maps to CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        message_(what) {}
  int line() const { return line_; }
  /// The message without the line prefix.
  const std::string& message() const { return message_; }

 private:
  int line_;
  std::string message_;
};

/// An analysis could not complete (size guard, coset cap, failed check).
/// Maps to CLI exit code 1.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rgcost
