// Buggy calculator #2: parentheses are dropped during tokenization, so the
// grouped contents are evaluated as part of the surrounding operand sequence.
#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

struct Tok {
  char op = 0;       // 0 means number
  int64_t num = 0;
};

std::vector<Tok> tokenize(const std::string& s) {
  std::vector<Tok> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')') {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      int64_t v = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        v = v * 10 + (s[i++] - '0');
      out.push_back({0, v});
      continue;
    }
    if (c == '+' || c == '-' || c == '*' || c == '/') {
      out.push_back({c, 0});
      ++i;
      continue;
    }
    throw std::runtime_error(std::string("bad character '") + c + "'");
  }
  return out;
}

struct Eval {
  const std::vector<Tok>& t;
  size_t i = 0;

  int64_t atom() {
    if (i >= t.size() || t[i].op != 0) throw std::runtime_error("expected a number");
    return t[i++].num;
  }

  int64_t term() {
    int64_t v = atom();
    while (i < t.size() && (t[i].op == '*' || t[i].op == '/')) {
      char op = t[i++].op;
      int64_t rhs = atom();
      if (op == '*') {
        v *= rhs;
      } else {
        if (rhs == 0) throw std::runtime_error("division by zero");
        v /= rhs;
      }
    }
    return v;
  }

  int64_t expr() {
    int64_t v = term();
    while (i < t.size() && (t[i].op == '+' || t[i].op == '-')) {
      char op = t[i++].op;
      v = op == '+' ? v + term() : v - term();
    }
    return v;
  }
};

std::string read_input(int argc, char** argv) {
  std::stringstream ss;
  if (argc > 1) {
    std::ifstream f(argv[1]);
    ss << f.rdbuf();
  } else {
    ss << std::cin.rdbuf();
  }
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  try {
    std::vector<Tok> toks = tokenize(read_input(argc, argv));
    Eval e{toks};
    int64_t v = e.expr();
    if (e.i != toks.size()) throw std::runtime_error("trailing input");
    std::cout << v << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
