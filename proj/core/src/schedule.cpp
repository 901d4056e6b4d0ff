#include <cctype>

#include "dgnn/schedule.hpp"
#include "dgnn/types.hpp"

namespace dgnn {

namespace {

class Parser {
 public:
  Parser(const std::string& s, long r) : s_(s), r_(r) {}

  long run() {
    const long v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  const std::string& s_;
  long r_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("bad schedule '" + s_ + "': " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool starts_factor() {
    skip();
    return pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == 'r' || s_[pos_] == '(');
  }

  long sum() {
    long v = product();
    for (;;) {
      if (eat('+')) {
        v += product();
      } else if (eat('-')) {
        v -= product();
      } else {
        return v;
      }
    }
  }
  long product() {
    long v = power();
    for (;;) {
      if (eat('*')) {
        v *= power();
      } else if (starts_factor()) {
        v *= power();
      } else {
        return v;
      }
    }
  }
  long power() {
    const long base = unary();
    if (eat('^')) {
      const long e = power();
      if (e < 0) fail("negative exponent");
      long v = 1;
      for (long i = 0; i < e; ++i) v *= base;
      return v;
    }
    return base;
  }
  long unary() {
    if (eat('-')) return -unary();
    return atom();
  }
  long atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      const long v = sum();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (s_[pos_] == 'r') {
      ++pos_;
      return r_;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      long v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) v = v * 10 + (s_[pos_++] - '0');
      return v;
    }
    fail("unexpected '" + std::string(1, s_[pos_]) + "'");
  }
};

}  // namespace

Schedule Schedule::parse(const std::string& text) {
  Schedule s;
  s.text_ = text;
  if (text.find_first_not_of(" \t") == std::string::npos) throw ConfigError("empty schedule");
  (void)s(1);
  return s;
}

Schedule Schedule::constant(int value) { return parse(std::to_string(value)); }

long Schedule::operator()(int r) const {
  if (text_.empty()) throw ConfigError("schedule not set");
  return Parser(text_, r).run();
}

}  // namespace dgnn
