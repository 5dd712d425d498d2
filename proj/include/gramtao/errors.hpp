#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gramtao {

// Grammar-file load errors. The kind separates plain syntax trouble from
// name-resolution problems (unknown semantic op, symbol not on the rhs).
class SpecError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownOperation, UnboundSymbol };

  SpecError(Kind kind, int line, const std::string& detail)
      : std::runtime_error("line " + std::to_string(line) + ": " + detail),
        kind_(kind),
        line_(line) {}

  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& op, const std::string& reason)
      : std::runtime_error(op + ": " + reason), op_(op) {}

  const std::string& op() const { return op_; }

 private:
  std::string op_;
};

class UnboundTagError : public std::runtime_error {
 public:
  explicit UnboundTagError(uint32_t index)
      : std::runtime_error("unbound tagging variable $[" + std::to_string(index) + "]"),
        index_(index) {}

  uint32_t index() const { return index_; }

 private:
  uint32_t index_;
};

// Infrastructure failure in the SUT harness (missing executable, pipe
// trouble). Never folded into a test verdict.
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// gdd() was handed an artifact the checker does not consider failing.
class NotFailingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gramtao
