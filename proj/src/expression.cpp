#include "leafstab/expression.hpp"

#include <cctype>

namespace leafstab {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Chart& chart) : text_(text), chart_(chart) {}

  RationalFunction parse() {
    RationalFunction r = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalFunction expr() {
    RationalFunction r = term();
    for (;;) {
      if (accept('+')) {
        r += term();
      } else if (accept('-')) {
        r -= term();
      } else {
        return r;
      }
    }
  }

  RationalFunction term() {
    RationalFunction r = factor();
    for (;;) {
      if (accept('*')) {
        r *= factor();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        RationalFunction d = factor();
        if (d.is_zero()) throw ParseError("division by zero", at);
        r /= d;
      } else {
        return r;
      }
    }
  }

  RationalFunction factor() {
    if (accept('-')) return -factor();
    RationalFunction base = atom();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    mpz_class e = integer();
    if (e > 1000) throw ParseError("exponent too large", at);
    RationalFunction r(chart_.num_vars(), Rational(1));
    for (unsigned long k = 0; k < e.get_ui(); ++k) r *= base;
    return r;
  }

  RationalFunction atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RationalFunction r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return rational();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  mpz_class integer() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  // A '/' directly followed by digits belongs to the literal: 1/2*x reads as (1/2)*x.
  RationalFunction rational() {
    mpz_class num = integer();
    mpz_class den = 1;
    std::size_t save = pos_;
    skip_space();
    if (pos_ + 1 < text_.size() && text_[pos_] == '/') {
      std::size_t p = pos_ + 1;
      while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        const std::size_t at = pos_;
        den = integer();
        if (den == 0) throw ParseError("zero denominator in literal", at);
      } else {
        pos_ = save;
      }
    } else {
      pos_ = save;
    }
    Rational q(num, den);
    q.canonicalize();
    return RationalFunction(chart_.num_vars(), q);
  }

  RationalFunction identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    auto idx = chart_.index_of(name);
    if (!idx) throw ParseError("unknown identifier '" + name + "'", start);
    return RationalFunction::variable(chart_.num_vars(), *idx);
  }

  std::string_view text_;
  const Chart& chart_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalFunction parse_expression(std::string_view text, const Chart& chart) {
  try {
    return Parser(text, chart).parse();
  } catch (const ArithmeticError& e) {
    throw ParseError(e.what(), text.size());
  }
}

std::string print_expression(const RationalFunction& f, const Chart& chart) { return f.to_string(chart); }

}  // namespace leafstab
