#include <algorithm>
#include <utility>

#include "tractorlab/expr.hpp"

namespace tractorlab {

namespace {

Expr cst(const ChartPtr& chart, Rational v) { return Expr::constant(chart, v); }

Expr simp(const Expr& e);

// Split a simplified expression into (rational coefficient, term). A null
// term means the expression is purely constant.
std::pair<Rational, std::optional<Expr>> split_coeff(const Expr& e) {
  if (e.is_constant()) return {e.constant_value(), std::nullopt};
  if (e.kind() == NodeKind::Product && e.node().kids[0].is_constant()) {
    const auto& kids = e.node().kids;
    Rational c = kids[0].constant_value();
    if (kids.size() == 2) return {c, kids[1]};
    std::vector<Expr> rest(kids.begin() + 1, kids.end());
    return {c, make_product(e.chart(), std::move(rest))};
  }
  return {Rational(1), e};
}

Expr rebuild_sum(const ChartPtr& chart, const Rational& c0,
                 std::vector<std::pair<Expr, Rational>>& terms) {
  std::vector<Expr> kids;
  if (!c0.is_zero()) kids.push_back(cst(chart, c0));
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  for (auto& [term, c] : terms) {
    if (c.is_zero()) continue;
    if (c.is_one())
      kids.push_back(term);
    else if (term.kind() == NodeKind::Product) {
      std::vector<Expr> factors;
      factors.push_back(cst(chart, c));
      for (const Expr& k : term.node().kids) factors.push_back(k);
      kids.push_back(make_product(chart, std::move(factors)));
    } else
      kids.push_back(make_product(chart, {cst(chart, c), term}));
  }
  if (kids.empty()) return cst(chart, Rational(0));
  if (kids.size() == 1) return kids[0];
  return make_sum(chart, std::move(kids));
}

Expr simp_sum(const Expr& e) {
  const ChartPtr& chart = e.chart();
  Rational c0(0);
  std::vector<std::pair<Expr, Rational>> terms;  // term -> coefficient
  auto add_term = [&](const Expr& term, const Rational& c) {
    for (auto& [t, acc] : terms) {
      if (identical(t, term)) {
        acc = acc + c;
        return;
      }
    }
    terms.emplace_back(term, c);
  };
  std::vector<Expr> stack(e.node().kids.rbegin(), e.node().kids.rend());
  while (!stack.empty()) {
    Expr k = simp(stack.back());
    stack.pop_back();
    if (k.kind() == NodeKind::Sum) {
      for (auto it = k.node().kids.rbegin(); it != k.node().kids.rend(); ++it)
        stack.push_back(*it);
      continue;
    }
    auto [c, term] = split_coeff(k);
    if (!term)
      c0 = c0 + c;
    else
      add_term(*term, c);
  }
  return rebuild_sum(chart, c0, terms);
}

Expr rebuild_pow(const Expr& base, int k) {
  if (k == 0) return cst(base.chart(), Rational(1));
  if (k == 1) return base;
  if (base.kind() == NodeKind::Exp)
    return simp(make_exp(cst(base.chart(), Rational(k)) * base.node().kids[0]));
  return make_pow(base, k);
}

Expr simp_product(const Expr& e) {
  const ChartPtr& chart = e.chart();
  Rational c0(1);
  std::vector<std::pair<Expr, int>> factors;  // base -> exponent
  std::vector<Expr> dens;                     // collected quotient denominators
  auto add_factor = [&](const Expr& base, int k) {
    for (auto& [b, acc] : factors) {
      if (identical(b, base)) {
        acc += k;
        return;
      }
    }
    factors.emplace_back(base, k);
  };
  std::vector<Expr> stack(e.node().kids.rbegin(), e.node().kids.rend());
  while (!stack.empty()) {
    Expr k = simp(stack.back());
    stack.pop_back();
    if (k.kind() == NodeKind::Product) {
      for (auto it = k.node().kids.rbegin(); it != k.node().kids.rend(); ++it)
        stack.push_back(*it);
      continue;
    }
    if (k.is_constant()) {
      c0 = c0 * k.constant_value();
      continue;
    }
    if (k.kind() == NodeKind::Quotient) {
      stack.push_back(k.node().kids[0]);
      dens.push_back(k.node().kids[1]);
      continue;
    }
    if (k.kind() == NodeKind::Pow)
      add_factor(k.node().kids[0], k.node().expo);
    else
      add_factor(k, 1);
  }
  if (c0.is_zero()) return cst(chart, Rational(0));
  std::sort(factors.begin(), factors.end(),
            [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  std::vector<Expr> kids;
  if (!c0.is_one()) kids.push_back(cst(chart, c0));
  std::vector<Expr> negpow;  // negative exponents join the denominator
  for (auto& [b, k] : factors) {
    if (k == 0) continue;
    if (k < 0)
      negpow.push_back(rebuild_pow(b, -k));
    else
      kids.push_back(rebuild_pow(b, k));
  }
  Expr num;
  if (kids.empty())
    num = cst(chart, Rational(1));
  else if (kids.size() == 1)
    num = kids[0];
  else
    num = make_product(chart, std::move(kids));
  for (Expr& d : negpow) dens.push_back(std::move(d));
  if (dens.empty()) return num;
  Expr den = dens.size() == 1 ? dens[0] : make_product(chart, std::move(dens));
  return simp(num / den);
}

Expr simp_pow(const Expr& e) {
  Expr b = simp(e.node().kids[0]);
  int k = e.node().expo;
  const ChartPtr& chart = e.chart();
  if (k == 0) return cst(chart, Rational(1));
  if (k == 1) return b;
  if (b.is_constant()) {
    if (b.is_zero() && k < 0) return make_pow(b, k);  // reported at evaluation
    return cst(chart, pow(b.constant_value(), k));
  }
  switch (b.kind()) {
    case NodeKind::Pow:
      return simp(make_pow(b.node().kids[0], b.node().expo * k));
    case NodeKind::Product: {
      std::vector<Expr> kids;
      for (const Expr& f : b.node().kids) kids.push_back(make_pow(f, k));
      return simp(make_product(chart, std::move(kids)));
    }
    case NodeKind::Quotient:
      return simp(make_pow(b.node().kids[0], k) / make_pow(b.node().kids[1], k));
    case NodeKind::Exp:
      return simp(make_exp(cst(chart, Rational(k)) * b.node().kids[0]));
    default:
      return make_pow(b, k);
  }
}

Expr simp_quotient(const Expr& e) {
  const ChartPtr& chart = e.chart();
  Expr u = simp(e.node().kids[0]);
  Expr v = simp(e.node().kids[1]);
  if (v.is_constant()) {
    if (v.is_zero()) return u / v;  // division by zero surfaces at evaluation
    return simp(u * v.constant_value().inverse());
  }
  if (u.is_zero()) return cst(chart, Rational(0));
  if (u.kind() == NodeKind::Quotient) {
    Expr nn = u.node().kids[0];
    Expr nd = u.node().kids[1];
    return simp(nn / make_product(chart, {nd, v}));
  }
  if (v.kind() == NodeKind::Quotient) {
    Expr dn = v.node().kids[0];
    Expr dd = v.node().kids[1];
    return simp(make_product(chart, {u, dd}) / dn);
  }
  if (identical(u, v)) return cst(chart, Rational(1));
  // pull a rational coefficient out of the denominator so the denominator is
  // monic w.r.t. its constant factor
  auto [cv, tv] = split_coeff(v);
  if (tv && !cv.is_one())
    return simp((u * cv.inverse()) / *tv);
  return u / v;
}

Expr simp(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::Symbol:
    case NodeKind::Opaque:
      return e;
    case NodeKind::Neg:
      return simp(cst(e.chart(), Rational(-1)) * e.node().kids[0]);
    case NodeKind::Exp: {
      Expr a = simp(e.node().kids[0]);
      if (a.is_zero()) return cst(e.chart(), Rational(1));
      return make_exp(a);
    }
    case NodeKind::Sum:
      return simp_sum(e);
    case NodeKind::Product:
      return simp_product(e);
    case NodeKind::Pow:
      return simp_pow(e);
    case NodeKind::Quotient:
      return simp_quotient(e);
  }
  throw std::logic_error("corrupt expression node");
}

}  // namespace

Expr simplify(const Expr& e) { return simp(e); }

}  // namespace tractorlab
