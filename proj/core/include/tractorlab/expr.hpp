#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tractorlab/rational.hpp"

namespace tractorlab {

/// Coordinate chart: ordered coordinate names, optionally a sampling box.
class Chart {
 public:
  Chart(std::vector<std::string> names);

  int dim() const { return int(names_.size()); }
  const std::string& name(int i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  /// Index of a coordinate name, or -1 if unknown.
  int index(const std::string& name) const;

  void set_bounds(int i, double lo, double hi);
  bool has_bounds(int i) const { return bounds_[i].has_value(); }
  std::pair<double, double> bounds(int i) const;
  /// Box for sampling: declared bounds, defaulting to [-1,1] per coordinate.
  std::pair<double, double> sample_box(int i) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::optional<std::pair<double, double>>> bounds_;
};

using ChartPtr = std::shared_ptr<const Chart>;

/// Point on a chart; coordinate values in chart order.
struct Point {
  std::vector<double> x;
  double operator[](int i) const { return x[size_t(i)]; }
  int dim() const { return int(x.size()); }
};

/// Numeric callback for an opaque function: receives the argument values and
/// per-argument derivative orders, returns the value of that partial.
using OpaqueFn =
    std::function<double(const std::vector<double>& args, const std::vector<int>& deriv)>;

/// Value/derivative table for the opaque functions of an expression.
class Bindings {
 public:
  void set(const std::string& name, OpaqueFn fn) { table_[name] = std::move(fn); }
  const OpaqueFn* find(const std::string& name) const;
  bool empty() const { return table_.empty(); }
  void merge(const Bindings& other);

 private:
  std::map<std::string, OpaqueFn> table_;
};

enum class NodeKind { Constant, Symbol, Opaque, Sum, Product, Pow, Neg, Exp, Quotient };

class Expr;
struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind;
  Rational value;          // Constant
  int symbol = -1;         // Symbol: coordinate index
  std::string name;        // Opaque: function name
  std::vector<int> args;   // Opaque: coordinate indices of declared arguments
  std::vector<int> deriv;  // Opaque: per-argument derivative orders
  std::vector<Expr> kids;  // children (Sum/Product: n-ary, Pow/Neg/Exp: 1, Quotient: 2)
  int expo = 1;            // Pow exponent
  mutable size_t hash = 0;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t offset)
      : std::runtime_error(msg), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_ = 0;
};

/// Immutable symbolic scalar expression over a chart's coordinates.
class Expr {
 public:
  Expr() = default;

  static Expr constant(ChartPtr chart, Rational c);
  static Expr symbol(ChartPtr chart, int index);
  static Expr opaque(ChartPtr chart, std::string name, std::vector<int> args,
                     std::vector<int> deriv = {});

  bool valid() const { return node_ != nullptr; }
  const ExprNode& node() const { return *node_; }
  NodeKind kind() const { return node_->kind; }
  const ChartPtr& chart() const { return chart_; }

  bool is_constant() const { return node_ && node_->kind == NodeKind::Constant; }
  bool is_zero() const { return is_constant() && node_->value.is_zero(); }
  bool is_one() const { return is_constant() && node_->value.is_one(); }
  const Rational& constant_value() const { return node_->value; }

  double evaluate(const Point& p, const Bindings& bindings = {}) const;
  std::string str() const;
  size_t hash() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr operator*(const Rational& c) const;

 private:
  friend Expr make_node(ChartPtr chart, ExprNode n);
  NodePtr node_;
  ChartPtr chart_;
};

Expr make_node(ChartPtr chart, ExprNode n);
Expr make_sum(ChartPtr chart, std::vector<Expr> kids);
Expr make_product(ChartPtr chart, std::vector<Expr> kids);
Expr make_pow(const Expr& base, int k);
Expr make_exp(const Expr& arg);

/// Structural comparison; total order used by the simplifier.
int compare(const Expr& a, const Expr& b);
bool identical(const Expr& a, const Expr& b);

/// Exact symbolic partial derivative w.r.t. a declared coordinate.
Expr differentiate(const Expr& e, int coord);
Expr differentiate(const Expr& e, const std::string& coord);

/// Fixed rewrite set: flatten sums/products, fold constants, cancel zero/one,
/// collect identical terms. Idempotent.
Expr simplify(const Expr& e);

/// Parse `source` against `chart` per the metric-definition grammar.
Expr parse_expr(const std::string& source, ChartPtr chart);

}  // namespace tractorlab
