#include "tractorlab/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tractorlab {

Chart::Chart(std::vector<std::string> names) : names_(std::move(names)) {
  for (size_t i = 0; i < names_.size(); ++i)
    for (size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j])
        throw std::invalid_argument("duplicate coordinate name: " + names_[i]);
  bounds_.resize(names_.size());
}

int Chart::index(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return int(i);
  return -1;
}

void Chart::set_bounds(int i, double lo, double hi) {
  if (lo >= hi) throw std::invalid_argument("empty bounds interval");
  bounds_.at(size_t(i)) = std::make_pair(lo, hi);
}

std::pair<double, double> Chart::bounds(int i) const {
  return bounds_.at(size_t(i)).value();
}

std::pair<double, double> Chart::sample_box(int i) const {
  if (bounds_[size_t(i)]) return *bounds_[size_t(i)];
  return {-1.0, 1.0};
}

const OpaqueFn* Bindings::find(const std::string& name) const {
  auto it = table_.find(name);
  return it == table_.end() ? nullptr : &it->second;
}

void Bindings::merge(const Bindings& other) {
  for (const auto& [k, v] : other.table_) table_[k] = v;
}

Expr make_node(ChartPtr chart, ExprNode n) {
  Expr e;
  e.node_ = std::make_shared<const ExprNode>(std::move(n));
  e.chart_ = std::move(chart);
  return e;
}

Expr Expr::constant(ChartPtr chart, Rational c) {
  ExprNode n;
  n.kind = NodeKind::Constant;
  n.value = c;
  return make_node(std::move(chart), std::move(n));
}

Expr Expr::symbol(ChartPtr chart, int index) {
  if (index < 0 || index >= chart->dim())
    throw std::out_of_range("coordinate index outside chart");
  ExprNode n;
  n.kind = NodeKind::Symbol;
  n.symbol = index;
  return make_node(std::move(chart), std::move(n));
}

Expr Expr::opaque(ChartPtr chart, std::string name, std::vector<int> args,
                  std::vector<int> deriv) {
  for (int a : args)
    if (a < 0 || a >= chart->dim())
      throw std::out_of_range("opaque argument outside chart");
  ExprNode n;
  n.kind = NodeKind::Opaque;
  n.name = std::move(name);
  n.args = std::move(args);
  n.deriv = deriv.empty() ? std::vector<int>(n.args.size(), 0) : std::move(deriv);
  return make_node(std::move(chart), std::move(n));
}

Expr make_sum(ChartPtr chart, std::vector<Expr> kids) {
  ExprNode n;
  n.kind = NodeKind::Sum;
  n.kids = std::move(kids);
  return make_node(std::move(chart), std::move(n));
}

Expr make_product(ChartPtr chart, std::vector<Expr> kids) {
  ExprNode n;
  n.kind = NodeKind::Product;
  n.kids = std::move(kids);
  return make_node(std::move(chart), std::move(n));
}

Expr make_pow(const Expr& base, int k) {
  ExprNode n;
  n.kind = NodeKind::Pow;
  n.kids = {base};
  n.expo = k;
  return make_node(base.chart(), std::move(n));
}

Expr make_exp(const Expr& arg) {
  ExprNode n;
  n.kind = NodeKind::Exp;
  n.kids = {arg};
  return make_node(arg.chart(), std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return make_sum(a.chart(), {a, b}); }

Expr operator-(const Expr& a, const Expr& b) {
  ExprNode neg;
  neg.kind = NodeKind::Neg;
  neg.kids = {b};
  return make_sum(a.chart(), {a, make_node(a.chart(), std::move(neg))});
}

Expr operator*(const Expr& a, const Expr& b) { return make_product(a.chart(), {a, b}); }

Expr operator/(const Expr& a, const Expr& b) {
  ExprNode n;
  n.kind = NodeKind::Quotient;
  n.kids = {a, b};
  return make_node(a.chart(), std::move(n));
}

Expr operator-(const Expr& a) {
  ExprNode n;
  n.kind = NodeKind::Neg;
  n.kids = {a};
  return make_node(a.chart(), std::move(n));
}

Expr Expr::operator*(const Rational& c) const {
  return make_product(chart_, {Expr::constant(chart_, c), *this});
}

double Expr::evaluate(const Point& p, const Bindings& bindings) const {
  const ExprNode& n = *node_;
  switch (n.kind) {
    case NodeKind::Constant:
      return n.value.to_double();
    case NodeKind::Symbol:
      if (n.symbol >= p.dim()) throw EvalError("point dimension below chart dimension");
      return p[n.symbol];
    case NodeKind::Opaque: {
      const OpaqueFn* fn = bindings.find(n.name);
      if (!fn) throw EvalError("missing binding for opaque function '" + n.name + "'");
      std::vector<double> av(n.args.size());
      for (size_t i = 0; i < n.args.size(); ++i) av[i] = p[n.args[i]];
      return (*fn)(av, n.deriv);
    }
    case NodeKind::Sum: {
      double s = 0;
      for (const Expr& k : n.kids) s += k.evaluate(p, bindings);
      return s;
    }
    case NodeKind::Product: {
      double s = 1;
      for (const Expr& k : n.kids) s *= k.evaluate(p, bindings);
      return s;
    }
    case NodeKind::Pow: {
      double b = n.kids[0].evaluate(p, bindings);
      if (n.expo < 0 && b == 0.0)
        throw EvalError("division by zero in " + str());
      return std::pow(b, n.expo);
    }
    case NodeKind::Neg:
      return -n.kids[0].evaluate(p, bindings);
    case NodeKind::Exp:
      return std::exp(n.kids[0].evaluate(p, bindings));
    case NodeKind::Quotient: {
      double den = n.kids[1].evaluate(p, bindings);
      if (den == 0.0) throw EvalError("division by zero in " + n.kids[1].str());
      return n.kids[0].evaluate(p, bindings) / den;
    }
  }
  throw EvalError("corrupt expression node");
}

namespace {

void print(const ExprNode& n, std::ostream& os) {
  switch (n.kind) {
    case NodeKind::Constant:
      if (n.value.num < 0)
        os << "(" << n.value.str() << ")";
      else
        os << n.value.str();
      break;
    case NodeKind::Symbol: {
      // chart reference lives on the Expr wrapper; symbol printing goes
      // through Expr::str which re-enters with the chart in scope
      os << "#" << n.symbol;
      break;
    }
    default:
      break;
  }
}

void print_expr(const Expr& e, std::ostream& os) {
  const ExprNode& n = e.node();
  switch (n.kind) {
    case NodeKind::Constant:
      if (n.value.num < 0 || !n.value.is_integer())
        os << "(" << n.value.str() << ")";
      else
        os << n.value.str();
      break;
    case NodeKind::Symbol:
      os << e.chart()->name(n.symbol);
      break;
    case NodeKind::Opaque: {
      bool tagged = false;
      for (int d : n.deriv) tagged |= d > 0;
      if (tagged) {
        os << "D[";
        for (size_t i = 0; i < n.deriv.size(); ++i)
          os << (i ? "," : "") << n.deriv[i];
        os << "]";
      }
      os << n.name << "(";
      for (size_t i = 0; i < n.args.size(); ++i)
        os << (i ? "," : "") << e.chart()->name(n.args[i]);
      os << ")";
      break;
    }
    case NodeKind::Sum: {
      os << "(";
      for (size_t i = 0; i < n.kids.size(); ++i) {
        if (i) os << " + ";
        print_expr(n.kids[i], os);
      }
      os << ")";
      break;
    }
    case NodeKind::Product: {
      os << "(";
      for (size_t i = 0; i < n.kids.size(); ++i) {
        if (i) os << "*";
        print_expr(n.kids[i], os);
      }
      os << ")";
      break;
    }
    case NodeKind::Pow:
      print_expr(n.kids[0], os);
      os << "^";
      if (n.expo < 0)
        os << "(" << n.expo << ")";
      else
        os << n.expo;
      break;
    case NodeKind::Neg:
      os << "(-";
      print_expr(n.kids[0], os);
      os << ")";
      break;
    case NodeKind::Exp:
      os << "exp(";
      print_expr(n.kids[0], os);
      os << ")";
      break;
    case NodeKind::Quotient:
      os << "(";
      print_expr(n.kids[0], os);
      os << "/";
      print_expr(n.kids[1], os);
      os << ")";
      break;
  }
  (void)print;
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  print_expr(*this, os);
  return os.str();
}

size_t Expr::hash() const {
  const ExprNode& n = *node_;
  if (n.hash) return n.hash;
  size_t h = size_t(n.kind) * 0x9e3779b97f4a7c15ull;
  auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  switch (n.kind) {
    case NodeKind::Constant:
      mix(size_t(n.value.num));
      mix(size_t(n.value.den));
      break;
    case NodeKind::Symbol:
      mix(size_t(n.symbol));
      break;
    case NodeKind::Opaque:
      mix(std::hash<std::string>()(n.name));
      for (int a : n.args) mix(size_t(a) + 17);
      for (int d : n.deriv) mix(size_t(d) + 31);
      break;
    default:
      mix(size_t(n.expo) + 101);
      for (const Expr& k : n.kids) mix(k.hash());
      break;
  }
  if (h == 0) h = 1;
  n.hash = h;
  return h;
}

int compare(const Expr& a, const Expr& b) {
  if (a.node().kind != b.node().kind)
    return int(a.node().kind) < int(b.node().kind) ? -1 : 1;
  const ExprNode& x = a.node();
  const ExprNode& y = b.node();
  switch (x.kind) {
    case NodeKind::Constant: {
      if (x.value == y.value) return 0;
      return x.value < y.value ? -1 : 1;
    }
    case NodeKind::Symbol:
      return x.symbol == y.symbol ? 0 : (x.symbol < y.symbol ? -1 : 1);
    case NodeKind::Opaque: {
      if (int c = x.name.compare(y.name)) return c < 0 ? -1 : 1;
      if (x.args != y.args) return x.args < y.args ? -1 : 1;
      if (x.deriv != y.deriv) return x.deriv < y.deriv ? -1 : 1;
      return 0;
    }
    default: {
      if (x.expo != y.expo) return x.expo < y.expo ? -1 : 1;
      if (x.kids.size() != y.kids.size())
        return x.kids.size() < y.kids.size() ? -1 : 1;
      for (size_t i = 0; i < x.kids.size(); ++i)
        if (int c = compare(x.kids[i], y.kids[i])) return c;
      return 0;
    }
  }
}

bool identical(const Expr& a, const Expr& b) {
  if (&a.node() == &b.node()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

Expr differentiate(const Expr& e, int coord) {
  ChartPtr chart = e.chart();
  if (coord < 0 || coord >= chart->dim())
    throw std::out_of_range("unknown coordinate index in differentiate");
  const ExprNode& n = e.node();
  auto zero = [&] { return Expr::constant(chart, Rational(0)); };
  switch (n.kind) {
    case NodeKind::Constant:
      return zero();
    case NodeKind::Symbol:
      return Expr::constant(chart, Rational(n.symbol == coord ? 1 : 0));
    case NodeKind::Opaque: {
      // Derivative w.r.t. a coordinate not in the argument list is
      // structurally zero.
      for (size_t i = 0; i < n.args.size(); ++i) {
        if (n.args[i] == coord) {
          std::vector<int> d = n.deriv;
          d[i] += 1;
          return Expr::opaque(chart, n.name, n.args, d);
        }
      }
      return zero();
    }
    case NodeKind::Sum: {
      std::vector<Expr> kids;
      kids.reserve(n.kids.size());
      for (const Expr& k : n.kids) kids.push_back(differentiate(k, coord));
      return make_sum(chart, std::move(kids));
    }
    case NodeKind::Product: {
      std::vector<Expr> terms;
      for (size_t i = 0; i < n.kids.size(); ++i) {
        std::vector<Expr> factors;
        for (size_t j = 0; j < n.kids.size(); ++j)
          factors.push_back(i == j ? differentiate(n.kids[j], coord) : n.kids[j]);
        terms.push_back(make_product(chart, std::move(factors)));
      }
      return make_sum(chart, std::move(terms));
    }
    case NodeKind::Pow: {
      Expr inner = differentiate(n.kids[0], coord);
      Expr lowered = make_pow(n.kids[0], n.expo - 1);
      return Expr::constant(chart, Rational(n.expo)) * lowered * inner;
    }
    case NodeKind::Neg:
      return -differentiate(n.kids[0], coord);
    case NodeKind::Exp:
      return differentiate(n.kids[0], coord) * e;
    case NodeKind::Quotient: {
      const Expr& u = n.kids[0];
      const Expr& v = n.kids[1];
      Expr num = differentiate(u, coord) * v - u * differentiate(v, coord);
      return num / make_pow(v, 2);
    }
  }
  throw std::logic_error("corrupt expression node");
}

Expr differentiate(const Expr& e, const std::string& coord) {
  int i = e.chart()->index(coord);
  if (i < 0) throw std::out_of_range("unknown coordinate '" + coord + "'");
  return differentiate(e, i);
}

}  // namespace tractorlab
