#pragma once

// Shared helpers for the test suites: repo fixtures, an independent
// recursive-descent evaluator used as the oracle for the semantic evaluator,
// in-process models of the buggy corpus calculators, and the brute-force
// mismatch sweep that freezes each mutant's failure-pattern set.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gramtao/checker.hpp"
#include "gramtao/derivgen.hpp"
#include "gramtao/gdd.hpp"
#include "gramtao/grammar_spec.hpp"
#include "gramtao/semantics.hpp"

#ifndef GRAMTAO_SOURCE_DIR
#define GRAMTAO_SOURCE_DIR "."
#endif

namespace testutil {

inline std::string repo_path(const std::string& rel) {
  return std::string(GRAMTAO_SOURCE_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fixture {
  gramtao::DomainRegistry registry;
  gramtao::GrammarSpec spec;
  const gramtao::Domain* domain = nullptr;
};

inline Fixture load_fixture(const std::string& rel_spec_path) {
  Fixture f;
  f.registry = gramtao::builtin_registry();
  f.spec = gramtao::parse_spec(read_file(repo_path(rel_spec_path)), f.registry);
  f.domain = f.registry.find(f.spec.domain_name);
  return f;
}

inline Fixture fixture_from_text(const std::string& text) {
  Fixture f;
  f.registry = gramtao::builtin_registry();
  f.spec = gramtao::parse_spec(text, f.registry);
  f.domain = f.registry.find(f.spec.domain_name);
  return f;
}

// --- independent reference evaluator ---------------------------------------
// Plain recursive descent over the text, left-associative, standard
// precedence, truncating division. Deliberately shares nothing with the
// library's evaluator. Returns nullopt on division by zero or overflow.

namespace detail {

struct RefParser {
  const std::string& s;
  size_t i = 0;
  bool failed = false;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  int64_t atom() {
    if (eat('(')) {
      int64_t v = expr();
      if (!eat(')')) throw std::runtime_error("missing )");
      return v;
    }
    skip();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw std::runtime_error("expected number");
    int64_t v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      v = v * 10 + (s[i++] - '0');
    return v;
  }

  int64_t apply(char op, int64_t a, int64_t b) {
    int64_t r = 0;
    switch (op) {
      case '+': failed = failed || __builtin_add_overflow(a, b, &r); break;
      case '-': failed = failed || __builtin_sub_overflow(a, b, &r); break;
      case '*': failed = failed || __builtin_mul_overflow(a, b, &r); break;
      case '/':
        if (b == 0 || (a == INT64_MIN && b == -1)) {
          failed = true;
        } else {
          r = a / b;
        }
        break;
    }
    return r;
  }

  int64_t term() {
    int64_t v = atom();
    while (true) {
      if (eat('*'))
        v = apply('*', v, atom());
      else if (eat('/'))
        v = apply('/', v, atom());
      else
        return v;
    }
  }

  int64_t expr() {
    int64_t v = term();
    while (true) {
      if (eat('+'))
        v = apply('+', v, term());
      else if (eat('-'))
        v = apply('-', v, term());
      else
        return v;
    }
  }
};

}  // namespace detail

inline std::optional<int64_t> ref_eval(const std::string& text) {
  detail::RefParser p{text};
  try {
    int64_t v = p.expr();
    p.skip();
    if (p.i != text.size()) return std::nullopt;
    return p.failed ? std::nullopt : std::optional<int64_t>(v);
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

// --- in-process models of the corpus mutants --------------------------------
// These mirror the standalone SUT executables; a cross-check test pins the
// binaries to the models. nullopt = the program would error out.

namespace detail {

struct MutParser {
  const std::string& s;
  size_t i = 0;
  int mutant;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }

  int64_t number() {
    skip();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw std::runtime_error("number");
    int64_t v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      v = v * 10 + (s[i++] - '0');
    return v;
  }

  int64_t divide(int64_t a, int64_t b) {
    if (b == 0) throw std::runtime_error("div0");
    return a / b;
  }

  int64_t atom() {
    if (peek() == '(') {
      ++i;
      int64_t v = expr();
      if (peek() != ')') throw std::runtime_error(")");
      ++i;
      return v;
    }
    return number();
  }

  // m1: right-associative within each precedence tier
  int64_t m1_term() {
    int64_t v = atom();
    if (peek() == '*') { ++i; return v * m1_term(); }
    if (peek() == '/') { ++i; return divide(v, m1_term()); }
    return v;
  }
  int64_t m1_expr() {
    int64_t v = m1_term();
    if (peek() == '+') { ++i; return v + m1_expr(); }
    if (peek() == '-') { ++i; return v - m1_expr(); }
    return v;
  }

  // m3: flat right-to-left fold, no precedence, parens respected
  int64_t m3_expr() {
    std::vector<int64_t> vals{atom()};
    std::vector<char> ops;
    while (true) {
      char c = peek();
      if (c != '+' && c != '-' && c != '*' && c != '/') break;
      ++i;
      ops.push_back(c);
      vals.push_back(atom());
    }
    int64_t v = vals.back();
    for (size_t k = ops.size(); k-- > 0;) {
      switch (ops[k]) {
        case '+': v = vals[k] + v; break;
        case '-': v = vals[k] - v; break;
        case '*': v = vals[k] * v; break;
        case '/': v = divide(vals[k], v); break;
      }
    }
    return v;
  }

  // m4: after '-', a multiplicative right side absorbs the additive tail
  int64_t m4_term(bool* had_mul) {
    int64_t v = atom();
    while (true) {
      char c = peek();
      if (c == '*') {
        ++i;
        v *= atom();
        if (had_mul) *had_mul = true;
      } else if (c == '/') {
        ++i;
        v = divide(v, atom());
        if (had_mul) *had_mul = true;
      } else {
        return v;
      }
    }
  }
  int64_t m4_expr() {
    int64_t v = m4_term(nullptr);
    while (true) {
      char c = peek();
      if (c == '+') {
        ++i;
        v += m4_term(nullptr);
      } else if (c == '-') {
        ++i;
        bool had_mul = false;
        int64_t rhs = m4_term(&had_mul);
        if (had_mul) {
          while (peek() == '+' || peek() == '-') {
            char op = peek();
            ++i;
            int64_t more = m4_term(nullptr);
            rhs = op == '+' ? rhs + more : rhs - more;
          }
        }
        v -= rhs;
      } else {
        return v;
      }
    }
  }

  // m5: the right operand of '*'/'/' swallows a following additive chain
  int64_t m5_mul_operand() {
    int64_t v = atom();
    while (true) {
      char c = peek();
      if (c == '+') { ++i; v += atom(); }
      else if (c == '-') { ++i; v -= atom(); }
      else return v;
    }
  }
  int64_t m5_term() {
    int64_t v = atom();
    while (true) {
      char c = peek();
      if (c == '*') { ++i; v *= m5_mul_operand(); }
      else if (c == '/') { ++i; v = divide(v, m5_mul_operand()); }
      else return v;
    }
  }
  int64_t m5_expr() {
    int64_t v = m5_term();
    while (true) {
      char c = peek();
      if (c == '+') { ++i; v += m5_term(); }
      else if (c == '-') { ++i; v -= m5_term(); }
      else return v;
    }
  }

  // m0/m2 share the correct fold (m2 runs it on a paren-stripped copy)
  int64_t m0_term() {
    int64_t v = atom();
    while (true) {
      char c = peek();
      if (c == '*') { ++i; v *= atom(); }
      else if (c == '/') { ++i; v = divide(v, atom()); }
      else return v;
    }
  }
  int64_t m0_expr() {
    int64_t v = m0_term();
    while (true) {
      char c = peek();
      if (c == '+') { ++i; v += m0_term(); }
      else if (c == '-') { ++i; v -= m0_term(); }
      else return v;
    }
  }

  int64_t expr() {
    switch (mutant) {
      case 1: return m1_expr();
      case 3: return m3_expr();
      case 4: return m4_expr();
      case 5: return m5_expr();
      default: return m0_expr();
    }
  }
};

}  // namespace detail

inline std::optional<int64_t> mutant_eval(int mutant, const std::string& text) {
  std::string input = text;
  if (mutant == 2) {
    std::string stripped;
    for (char c : input)
      if (c != '(' && c != ')') stripped += c;
    input = stripped;
    mutant = 0;
  }
  detail::MutParser p{input, 0, mutant};
  try {
    int64_t v = p.expr();
    p.skip();
    if (p.i != input.size()) return std::nullopt;
    return v;
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

// In-process checker with the same verdict discipline as the SUT harness:
// model error = crash class, wrong value = mismatch. Text after '=' (the
// embedded assertion of the tagged grammar) is ignored by the model.
inline gramtao::FailureChecker mutant_checker(int mutant) {
  return [mutant](const std::string& text, const gramtao::SemValue& oracle) {
    std::string expr = text.substr(0, text.find('='));
    std::optional<int64_t> v = mutant_eval(mutant, expr);
    gramtao::CheckOutcome out;
    if (!v) {
      out.cls = gramtao::FailureClass::SutCrash;
      out.actual = "error";
      return out;
    }
    out.actual = std::to_string(*v);
    out.cls = (oracle.kind == gramtao::SemValue::Kind::Int && *v == oracle.i)
                  ? gramtao::FailureClass::None
                  : gramtao::FailureClass::OracleMismatch;
    return out;
  };
}

// --- operator-pattern helpers ----------------------------------------------

// The operator sequence of an expression ("15/85/88" -> "//"). Empty when the
// text contains anything but digits, whitespace and the four operators.
inline std::string op_sequence(const std::string& text) {
  std::string ops;
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        std::isspace(static_cast<unsigned char>(c)))
      continue;
    if (c == '+' || c == '-' || c == '*' || c == '/')
      ops += c;
    else
      return {};
  }
  return ops;
}

inline bool is_flat_pattern(const std::string& text, size_t op_count) {
  return op_sequence(text).size() == op_count && text.find('(') == std::string::npos &&
         !op_sequence(text).empty();
}

// --- brute-force mismatch sweeps ---------------------------------------------
// All operand assignments in 1..9; inputs whose *correct* evaluation divides
// by zero are skipped, a mutant-side error counts as a mismatch (the real
// program would crash, which is a failure).

inline bool sweep_mismatch(int mutant, const std::string& input) {
  std::optional<int64_t> correct = ref_eval(input);
  if (!correct) return false;  // skip: reference divides by zero
  std::optional<int64_t> got = mutant_eval(mutant, input);
  return !got || *got != *correct;
}

inline std::set<std::string> sweep_flat2(int mutant) {
  const char ops[] = {'+', '-', '*', '/'};
  std::set<std::string> out;
  for (char o1 : ops)
    for (char o2 : ops) {
      bool mismatch = false;
      for (int a = 1; a <= 9 && !mismatch; ++a)
        for (int b = 1; b <= 9 && !mismatch; ++b)
          for (int c = 1; c <= 9 && !mismatch; ++c) {
            std::string in = std::to_string(a) + o1 + std::to_string(b) + o2 + std::to_string(c);
            mismatch = sweep_mismatch(mutant, in);
          }
      if (mismatch) out.insert(std::string() + o1 + o2);
    }
  return out;
}

inline std::set<std::string> sweep_flat3(int mutant) {
  const char ops[] = {'+', '-', '*', '/'};
  std::set<std::string> out;
  for (char o1 : ops)
    for (char o2 : ops)
      for (char o3 : ops) {
        bool mismatch = false;
        for (int a = 1; a <= 9 && !mismatch; ++a)
          for (int b = 1; b <= 9 && !mismatch; ++b)
            for (int c = 1; c <= 9 && !mismatch; ++c)
              for (int d = 1; d <= 9 && !mismatch; ++d) {
                std::string in = std::to_string(a) + o1 + std::to_string(b) + o2 +
                                 std::to_string(c) + o3 + std::to_string(d);
                mismatch = sweep_mismatch(mutant, in);
              }
        if (mismatch) out.insert(std::string() + o1 + o2 + o3);
      }
  return out;
}

// --- derivation-tree builder for arithmetic expressions -----------------------

inline const gramtao::Production* find_production(const gramtao::GrammarSpec& spec,
                                                  const std::string& lhs,
                                                  const std::vector<gramtao::Symbol>& rhs) {
  auto it = spec.by_lhs.find(lhs);
  if (it == spec.by_lhs.end()) return nullptr;
  for (int idx : it->second)
    if (spec.productions[idx].rhs == rhs) return &spec.productions[idx];
  return nullptr;
}

namespace detail {

struct ArithTreeBuilder {
  const gramtao::GrammarSpec& spec;
  gramtao::DerivationTree tree;
  const std::string& s;
  size_t i = 0;

  ArithTreeBuilder(const gramtao::GrammarSpec& sp, const std::string& text)
      : spec(sp), tree(&sp), s(text) {}

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }

  gramtao::DerivNode* wrap(const std::string& lhs, const std::vector<gramtao::Symbol>& rhs,
                           const std::vector<gramtao::DerivNode*>& kids) {
    const gramtao::Production* p = find_production(spec, lhs, rhs);
    if (!p) throw std::runtime_error("grammar lacks a rule " + lhs);
    gramtao::DerivNode* n = tree.make(gramtao::sym_var(lhs));
    n->production = p;
    gramtao::DerivNode** link = &n->first_child;
    for (gramtao::DerivNode* k : kids) {
      *link = k;
      link = &k->next_sibling;
    }
    return n;
  }

  gramtao::DerivNode* lit(const std::string& text) {
    return tree.make(gramtao::sym_lit(text));
  }

  gramtao::DerivNode* number_leaf(int64_t v) {
    gramtao::DerivNode* n = tree.make(gramtao::sym_class("N"));
    n->value = v;
    return n;
  }

  gramtao::DerivNode* factor() {  // returns a T node
    using gramtao::sym_class;
    using gramtao::sym_lit;
    using gramtao::sym_var;
    if (peek() == '(') {
      ++i;
      gramtao::DerivNode* e = expr();
      if (peek() != ')') throw std::runtime_error("missing )");
      ++i;
      return wrap("T", {sym_lit("("), sym_var("E"), sym_lit(")")}, {lit("("), e, lit(")")});
    }
    skip();
    int64_t v = 0;
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw std::runtime_error("expected number");
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      v = v * 10 + (s[i++] - '0');
    return wrap("T", {sym_class("N")}, {number_leaf(v)});
  }

  gramtao::DerivNode* term() {  // returns an F node
    using gramtao::sym_lit;
    using gramtao::sym_var;
    gramtao::DerivNode* f = wrap("F", {sym_var("T")}, {factor()});
    while (true) {
      char c = peek();
      if (c != '*' && c != '/') return f;
      ++i;
      gramtao::DerivNode* t = factor();
      f = wrap("F", {sym_var("F"), sym_lit(std::string(1, c)), sym_var("T")},
               {f, lit(std::string(1, c)), t});
    }
  }

  gramtao::DerivNode* expr() {  // returns an E node
    using gramtao::sym_lit;
    using gramtao::sym_var;
    gramtao::DerivNode* e = wrap("E", {sym_var("F")}, {term()});
    while (true) {
      char c = peek();
      if (c != '+' && c != '-') return e;
      ++i;
      gramtao::DerivNode* f = term();
      e = wrap("E", {sym_var("E"), sym_lit(std::string(1, c)), sym_var("F")},
               {e, lit(std::string(1, c)), f});
    }
  }
};

}  // namespace detail

// Derivation tree of an arithmetic expression under the E/F/T grammar
// (left-associative parse, matching the generator's structures).
inline gramtao::DerivationTree build_arith_tree(const gramtao::GrammarSpec& spec,
                                                const std::string& text) {
  detail::ArithTreeBuilder b(spec, text);
  gramtao::DerivNode* e = b.expr();
  b.skip();
  if (b.i != text.size()) throw std::runtime_error("trailing input in " + text);
  b.tree.set_root(e);
  return std::move(b.tree);
}

inline gramtao::TestArtifact build_arith_artifact(const gramtao::GrammarSpec& spec,
                                                  const gramtao::Domain& domain,
                                                  const std::string& text) {
  return gramtao::make_artifact(build_arith_tree(spec, text), domain);
}

// Structural programming language used by the reduction-strategy examples.
inline std::string structured_grammar_text() {
  return R"(Program ::= Def StmtSeq
StmtSeq* ::= Stmt
StmtSeq ::= Stmt StmtSeq
Stmt* ::= Asgn
Stmt ::= 'while' Cond '{' StmtSeq '}'
Asgn ::= 'x' '=' [V] ';'
Cond ::= 'x' '<' [V]
Def ::= 'int' 'x' ';'
[V] ::= 0 .. 9
)";
}

}  // namespace testutil
