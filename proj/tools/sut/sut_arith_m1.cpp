// Buggy calculator #1: operator precedence is respected, but chains of
// equal-precedence operators associate to the right (2-3+4 becomes 2-(3+4)).
#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

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

  int64_t term() {
    int64_t v = atom();
    char c = peek();
    if (c == '*') {
      ++i;
      return v * term();
    }
    if (c == '/') {
      ++i;
      int64_t d = term();
      if (d == 0) throw std::runtime_error("division by zero");
      return v / d;
    }
    return v;
  }

  int64_t expr() {
    int64_t v = term();
    char c = peek();
    if (c == '+') {
      ++i;
      return v + expr();
    }
    if (c == '-') {
      ++i;
      return v - expr();
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
