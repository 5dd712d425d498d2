// Buggy calculator #3: parenthesized groups work, but otherwise the operand
// list is folded right-to-left with no operator precedence at all.
#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

struct Parser {
  const std::string& s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }

  int64_t atom() {
    if (peek() == '(') {
      ++i;
      int64_t v = expr();
      if (peek() != ')') throw std::runtime_error("missing ')'");
      ++i;
      return v;
    }
    skip();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw std::runtime_error("expected a number");
    int64_t v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      v = v * 10 + (s[i++] - '0');
    return v;
  }

  int64_t expr() {
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
        case '/':
          if (v == 0) throw std::runtime_error("division by zero");
          v = vals[k] / v;
          break;
      }
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
  std::string input = read_input(argc, argv);
  try {
    Parser p{input};
    int64_t v = p.expr();
    p.skip();
    if (p.i != input.size()) throw std::runtime_error("trailing input");
    std::cout << v << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
