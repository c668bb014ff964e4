#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evlam {

enum class ErrorCode {
  NotJoinable,
  NotLambdaI,
  DegreeMismatch,
  DegreeUnderflow,
  BlockedRedex,
  InvalidSite,
  RuleMismatch,
  GrammarViolation,
  ModeError,
  SyntaxError,
  ValidationError,
  NotClosed,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse errors carry a source position (1-based).
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& msg)
      : Error(ErrorCode::SyntaxError,
              "syntax error at " + std::to_string(line) + ":" +
                  std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Derivation-checking errors point at the offending node: the path is the
// list of premise indexes from the root.
class RuleMismatchError : public Error {
 public:
  RuleMismatchError(std::vector<int> path, const std::string& reason)
      : Error(ErrorCode::RuleMismatch, format(path, reason)),
        path_(std::move(path)) {}

  const std::vector<int>& path() const noexcept { return path_; }

 private:
  static std::string format(const std::vector<int>& path,
                            const std::string& reason);
  std::vector<int> path_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace evlam
