// Buggy calculator #5: the right operand of '*' or '/' greedily swallows a
// following chain of additions and subtractions (8/4-2 becomes 8/(4-2)).
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

  int64_t mul_operand() {
    int64_t v = atom();
    while (true) {
      char c = peek();
      if (c == '+') {
        ++i;
        v += atom();
      } else if (c == '-') {
        ++i;
        v -= atom();
      } else {
        return v;
      }
    }
  }

  int64_t term() {
    int64_t v = atom();
    while (true) {
      char c = peek();
      if (c == '*') {
        ++i;
        v *= mul_operand();
      } else if (c == '/') {
        ++i;
        int64_t d = mul_operand();
        if (d == 0) throw std::runtime_error("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  int64_t expr() {
    int64_t v = term();
    while (true) {
      char c = peek();
      if (c == '+') {
        ++i;
        v += term();
      } else if (c == '-') {
        ++i;
        v -= term();
      } else {
        return v;
      }
    }
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
