#include "tractorlab/rational.hpp"

#include <numeric>

namespace tractorlab {

namespace {

std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN)
    throw std::overflow_error("rational overflow");
  return std::int64_t(v);
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) { n = -n; d = -d; }
  std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) { n /= g; d /= g; }
  num = n;
  den = d;
}

Rational Rational::from_decimal(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::int64_t scale = 1;
  for (size_t i = dot + 1; i < text.size(); ++i) scale = checked(__int128(scale) * 10);
  return Rational(std::stoll(digits), scale);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational Rational::operator-() const {
  Rational r;
  r.num = -num;
  r.den = den;
  return r;
}

Rational Rational::inverse() const {
  if (num == 0) throw std::domain_error("inverse of zero rational");
  return Rational(den, num);
}

Rational operator+(const Rational& a, const Rational& b) {
  __int128 n = __int128(a.num) * b.den + __int128(b.num) * a.den;
  __int128 d = __int128(a.den) * b.den;
  return Rational(checked(n), checked(d));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  std::int64_t g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
  std::int64_t g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
  __int128 n = __int128(a.num / (g1 ? g1 : 1)) * (b.num / (g2 ? g2 : 1));
  __int128 d = __int128(a.den / (g2 ? g2 : 1)) * (b.den / (g1 ? g1 : 1));
  return Rational(checked(n), checked(d));
}

Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

bool operator<(const Rational& a, const Rational& b) {
  return __int128(a.num) * b.den < __int128(b.num) * a.den;
}

Rational pow(const Rational& a, int k) {
  if (k == 0) return Rational(1);
  Rational base = k > 0 ? a : a.inverse();
  int e = k > 0 ? k : -k;
  Rational r(1);
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

}  // namespace tractorlab
