// Reference integer-expression calculator: left-associative, ordinary
// operator precedence, division truncates toward zero.
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
      if (!eat(')')) throw std::runtime_error("missing ')'");
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
    while (true) {
      if (eat('*')) {
        v *= atom();
      } else if (eat('/')) {
        int64_t d = atom();
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
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
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
