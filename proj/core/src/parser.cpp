#include <cctype>

#include "tractorlab/expr.hpp"

namespace tractorlab {

namespace {

// expr    := term (('+'|'-') term)*
// term    := factor (('*'|'/') factor)*
// factor  := base ('^' integer)?
// base    := number | ident | ident '(' ident (',' ident)* ')'
//          | 'exp' '(' expr ')' | '(' expr ')' | '-' base
class Parser {
 public:
  Parser(const std::string& src, ChartPtr chart) : src_(src), chart_(std::move(chart)) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("unexpected input at offset " + std::to_string(pos_), pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at offset " + std::to_string(pos_), pos_);
  }

  Expr parse_sum() {
    Expr e = parse_term();
    for (;;) {
      if (eat('+'))
        e = e + parse_term();
      else if (eat('-'))
        e = e - parse_term();
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (eat('*'))
        e = e * parse_factor();
      else if (eat('/'))
        e = e / parse_factor();
      else
        return e;
    }
  }

  Expr parse_factor() {
    Expr b = parse_base();
    if (eat('^')) return make_pow(b, parse_int());
    return b;
  }

  int parse_int() {
    skip_ws();
    size_t start = pos_;
    bool neg = false;
    if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
      neg = src_[pos_] == '-';
      ++pos_;
    }
    if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
      fail("expected integer exponent");
    long v = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      v = v * 10 + (src_[pos_] - '0');
      if (v > 64) fail("exponent too large");
      ++pos_;
    }
    (void)start;
    return int(neg ? -v : v);
  }

  Expr parse_number() {
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    try {
      return Expr::constant(chart_, Rational::from_decimal(src_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      pos_ = start;
      fail("malformed number");
    }
  }

  std::string parse_ident() {
    skip_ws();
    size_t start = pos_;
    if (pos_ >= src_.size() || !(std::isalpha(static_cast<unsigned char>(src_[pos_]))))
      fail("expected identifier");
    ++pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    return src_.substr(start, pos_ - start);
  }

  Expr parse_base() {
    char c = peek();
    if (c == '(') {
      eat('(');
      Expr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (c == '-') {
      eat('-');
      return -parse_base();
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    size_t id_pos = pos_;
    std::string name = parse_ident();
    if (name == "exp") {
      if (!eat('(')) fail("expected '(' after exp");
      Expr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return make_exp(e);
    }
    if (peek() == '(') {
      eat('(');
      std::vector<int> args;
      for (;;) {
        size_t apos = pos_;
        std::string arg = parse_ident();
        int idx = chart_->index(arg);
        if (idx < 0)
          throw ParseError("unknown coordinate '" + arg + "' at offset " +
                               std::to_string(apos),
                           apos);
        args.push_back(idx);
        if (eat(',')) continue;
        if (eat(')')) break;
        fail("expected ',' or ')'");
      }
      return Expr::opaque(chart_, name, args);
    }
    int idx = chart_->index(name);
    if (idx < 0)
      throw ParseError("unknown symbol '" + name + "' at offset " + std::to_string(id_pos),
                       id_pos);
    return Expr::symbol(chart_, idx);
  }

  const std::string& src_;
  ChartPtr chart_;
  size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& source, ChartPtr chart) {
  return Parser(source, std::move(chart)).parse();
}

}  // namespace tractorlab
