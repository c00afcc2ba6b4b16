#include "berk/parse.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace berk {

namespace {

struct Parser {
  const std::string& s;
  std::size_t i = 0;

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    std::ostringstream os;
    os << "parse error at position " << at + 1 << ": " << what;
    throw std::invalid_argument(os.str());
  }

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    }
  }

  bool at_end() {
    skip_ws();
    return i >= s.size();
  }

  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }

  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  Int integer() {
    skip_ws();
    std::size_t start = i;
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i++];
    }
    if (digits.empty()) fail("expected an integer", start);
    if (digits.size() > 4000) fail("integer literal too long", start);
    return Int(digits);
  }

  RatFunc primary() {
    skip_ws();
    if (i >= s.size()) fail("unexpected end of input", i);
    char c = s[i];
    if (c == '(') {
      ++i;
      RatFunc e = expr();
      if (!eat(')')) fail("expected ')'", i);
      return e;
    }
    if (c == 'T' || c == 't') {
      ++i;
      return RatFunc::t();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return RatFunc(Rat(integer()));
    }
    fail(std::string("unexpected character '") + c + "'", i);
  }

  RatFunc power() {
    std::size_t base_at = i;
    RatFunc base = primary();
    if (!eat('^')) return base;
    skip_ws();
    bool neg = false;
    while (peek() == '+' || peek() == '-') {
      if (eat('-')) neg = !neg;
      else eat('+');
    }
    std::size_t exp_at = i;
    Int e = integer();
    if (e > 64) fail("exponent larger than 64", exp_at);
    long n = to_long(e);
    RatFunc acc{Rat(1)};
    for (long k = 0; k < n; ++k) acc = acc * base;
    if (neg) {
      if (acc.is_zero()) fail("zero raised to a negative power", base_at);
      acc = RatFunc(Rat(1)) / acc;
    }
    return acc;
  }

  RatFunc unary() {
    bool neg = false;
    while (peek() == '+' || peek() == '-') {
      if (eat('-')) neg = !neg;
      else eat('+');
    }
    RatFunc v = power();
    return neg ? RatFunc(Rat(0)) - v : v;
  }

  RatFunc term() {
    RatFunc v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (peek() == '/') {
        std::size_t at = i;
        eat('/');
        RatFunc d = unary();
        if (d.is_zero()) fail("division by the zero polynomial", at);
        v = v / d;
      } else {
        return v;
      }
    }
  }

  RatFunc expr() {
    RatFunc v = term();
    for (;;) {
      if (eat('+')) {
        v = v + term();
      } else if (peek() == '-') {
        eat('-');
        v = v - term();
      } else {
        return v;
      }
    }
  }
};

}  // namespace

RatFunc parse_ratfunc(const std::string& text) {
  Parser p{text};
  RatFunc v = p.expr();
  if (!p.at_end()) p.fail("trailing input", p.i);
  return v;
}

ParsedForm parse_form(const std::string& text, std::int64_t p) {
  Parser parser{text};
  std::vector<RatFunc> entries;
  std::vector<std::size_t> stripped;
  std::size_t pos = 0;
  for (;;) {
    RatFunc c = parser.expr();
    if (c.is_zero()) {
      stripped.push_back(pos);
    } else {
      entries.push_back(c);
    }
    ++pos;
    if (!parser.eat(',')) break;
  }
  if (!parser.at_end()) parser.fail("trailing input", parser.i);
  if (entries.empty()) {
    throw std::invalid_argument(
        "all coefficients are zero: the form has no regular part");
  }
  ParsedForm out{QuadForm(p, std::move(entries)), std::move(stripped), ""};
  if (!out.stripped.empty()) {
    std::ostringstream os;
    os << "dropped " << out.stripped.size() << " zero coefficient"
       << (out.stripped.size() == 1 ? "" : "s") << " (entry";
    for (std::size_t k : out.stripped) os << " " << k + 1;
    os << "): zero entries are degenerate directions, the analysis "
          "concerns the regular part";
    out.note = os.str();
  }
  return out;
}

}  // namespace berk
