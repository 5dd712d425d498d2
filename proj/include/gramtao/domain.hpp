#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>

#include "gramtao/value.hpp"

namespace gramtao {

// A semantic domain: a named registry of valuation operations. Ops check
// their operand kinds and throw EvalError; arity is checked when a grammar
// file is loaded and again before dispatch.
struct Domain {
  struct Op {
    int arity = 0;
    std::function<SemValue(std::span<const SemValue>)> fn;
  };

  std::string name;
  std::map<std::string, Op> ops;

  bool has(const std::string& op) const { return ops.count(op) != 0; }
  const Op* find(const std::string& op) const;
  void add(const std::string& op, int arity,
           std::function<SemValue(std::span<const SemValue>)> fn);
};

class DomainRegistry {
 public:
  void add(Domain d);
  const Domain* find(const std::string& name) const;

 private:
  std::map<std::string, Domain> domains_;
};

}  // namespace gramtao
