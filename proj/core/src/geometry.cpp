#include "tractorlab/geometry.hpp"

#include <algorithm>

namespace tractorlab {

Vec VectorField::evaluate(const Point& p, const Bindings& b) const {
  Vec v(comp.size());
  for (size_t i = 0; i < comp.size(); ++i) v[Eigen::Index(i)] = comp[i].evaluate(p, b);
  return v;
}

Vec OneForm::evaluate(const Point& p, const Bindings& b) const {
  Vec v(comp.size());
  for (size_t i = 0; i < comp.size(); ++i) v[Eigen::Index(i)] = comp[i].evaluate(p, b);
  return v;
}

Expr zero_expr(const ChartPtr& chart) { return Expr::constant(chart, Rational(0)); }
Expr one_expr(const ChartPtr& chart) { return Expr::constant(chart, Rational(1)); }

VectorField coordinate_field(const ChartPtr& chart, int i) {
  VectorField v;
  v.comp.assign(size_t(chart->dim()), zero_expr(chart));
  v.comp[size_t(i)] = one_expr(chart);
  return v;
}

VectorField zero_field(const ChartPtr& chart) {
  VectorField v;
  v.comp.assign(size_t(chart->dim()), zero_expr(chart));
  return v;
}

ChartMetric::ChartMetric(ChartPtr chart, std::vector<std::vector<Expr>> components, int p,
                         int q, Bindings bindings)
    : chart_(std::move(chart)), comp_(std::move(components)), p_(p), q_(q),
      bindings_(std::move(bindings)) {
  int n = chart_->dim();
  if (p_ + q_ != n) throw std::invalid_argument("signature does not sum to dimension");
  if (int(comp_.size()) != n) throw std::invalid_argument("metric matrix size mismatch");
  for (auto& row : comp_)
    if (int(row.size()) != n) throw std::invalid_argument("metric matrix size mismatch");
  // symmetrize structurally: store the given upper triangle mirrored
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) comp_[size_t(j)][size_t(i)] = comp_[size_t(i)][size_t(j)];
}

Mat ChartMetric::evaluate(const Point& pt) const {
  int n = dim();
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = comp_[size_t(i)][size_t(j)].evaluate(pt, bindings_);
  return m;
}

bool ChartMetric::signature_ok(const Point& pt, double tol) const {
  Inertia in = inertia_of(evaluate(pt), tol);
  return in.null_count == 0 && in.neg == p_ && in.pos == q_;
}

double ChartMetric::inner(const VectorField& X, const VectorField& Y, const Point& pt) const {
  return X.evaluate(pt, bindings_).dot(evaluate(pt) * Y.evaluate(pt, bindings_));
}

const CurvatureBundle& ChartMetric::curvature() const {
  if (!curv_) curv_ = std::make_shared<const CurvatureBundle>(compute_curvature(*this));
  return *curv_;
}

namespace {

int structural_zeros(const std::vector<Expr>& row) {
  int z = 0;
  for (const Expr& e : row)
    if (e.is_zero()) ++z;
  return z;
}

Expr det_rec(const ChartPtr& chart, std::vector<std::vector<Expr>> m) {
  size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2)
    return simplify(m[0][0] * m[1][1] - m[0][1] * m[1][0]);
  // expand along the row with the most structural zeros
  size_t best = 0;
  int bz = -1;
  for (size_t r = 0; r < n; ++r) {
    int z = structural_zeros(m[r]);
    if (z > bz) { bz = z; best = r; }
  }
  Expr acc = zero_expr(chart);
  for (size_t c = 0; c < n; ++c) {
    if (m[best][c].is_zero()) continue;
    std::vector<std::vector<Expr>> minor;
    minor.reserve(n - 1);
    for (size_t r = 0; r < n; ++r) {
      if (r == best) continue;
      std::vector<Expr> row;
      row.reserve(n - 1);
      for (size_t cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      minor.push_back(std::move(row));
    }
    Expr term = m[best][c] * det_rec(chart, std::move(minor));
    if ((best + c) % 2) term = -term;
    acc = acc + term;
  }
  return simplify(acc);
}

}  // namespace

Expr symbolic_det(const ChartPtr& chart, const std::vector<std::vector<Expr>>& m) {
  return det_rec(chart, m);
}

CurvatureBundle compute_curvature(const ChartMetric& g) {
  const ChartPtr& chart = g.chart();
  int n = g.dim();
  if (n < 3) throw std::domain_error("conformal geometry needs dimension >= 3");
  CurvatureBundle out;

  // inverse metric as adjugate / det over the expression field
  out.det = symbolic_det(chart, g.components());
  if (out.det.is_zero())
    throw std::domain_error("metric determinant is structurally zero");
  out.inverse_metric.assign(size_t(n), std::vector<Expr>(size_t(n), zero_expr(chart)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<std::vector<Expr>> minor;
      for (int r = 0; r < n; ++r) {
        if (r == i) continue;
        std::vector<Expr> row;
        for (int c = 0; c < n; ++c)
          if (c != j) row.push_back(g.component(r, c));
        minor.push_back(std::move(row));
      }
      Expr cof = det_rec(chart, std::move(minor));
      if ((i + j) % 2) cof = -cof;
      // adjugate transpose; metric is symmetric so the transpose is free
      out.inverse_metric[size_t(i)][size_t(j)] = simplify(cof / out.det);
    }
  }

  // first derivatives of the metric
  std::vector<std::vector<std::vector<Expr>>> dg{
      size_t(n), std::vector<std::vector<Expr>>(size_t(n), std::vector<Expr>(size_t(n)))};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        dg[size_t(k)][size_t(i)][size_t(j)] = simplify(differentiate(g.component(i, j), k));

  // Γ^k_ij = 1/2 g^{kl} (∂_i g_lj + ∂_j g_li − ∂_l g_ij)
  out.christoffel.assign(
      size_t(n), std::vector<std::vector<Expr>>(size_t(n), std::vector<Expr>(size_t(n))));
  Expr half = Expr::constant(chart, Rational(1, 2));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Expr acc = zero_expr(chart);
        for (int l = 0; l < n; ++l) {
          const Expr& ginv = out.inverse_metric[size_t(k)][size_t(l)];
          if (ginv.is_zero()) continue;
          Expr inner = dg[size_t(i)][size_t(l)][size_t(j)] +
                       dg[size_t(j)][size_t(l)][size_t(i)] -
                       dg[size_t(l)][size_t(i)][size_t(j)];
          acc = acc + ginv * inner;
        }
        Expr gamma = simplify(half * acc);
        out.christoffel[size_t(k)][size_t(i)][size_t(j)] = gamma;
        out.christoffel[size_t(k)][size_t(j)][size_t(i)] = gamma;
      }

  // R^l_ijk = ∂_j Γ^l_ik − ∂_k Γ^l_ij + Γ^l_jm Γ^m_ik − Γ^l_km Γ^m_ij
  out.riemann.assign(size_t(n),
                     std::vector<std::vector<std::vector<Expr>>>(
                         size_t(n), std::vector<std::vector<Expr>>(
                                        size_t(n), std::vector<Expr>(size_t(n)))));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (j == k) {
            out.riemann[size_t(l)][size_t(i)][size_t(j)][size_t(k)] = zero_expr(chart);
            continue;
          }
          if (j > k) {
            out.riemann[size_t(l)][size_t(i)][size_t(j)][size_t(k)] =
                simplify(-out.riemann[size_t(l)][size_t(i)][size_t(k)][size_t(j)]);
            continue;
          }
          Expr acc = differentiate(out.christoffel[size_t(l)][size_t(i)][size_t(k)], j) -
                     differentiate(out.christoffel[size_t(l)][size_t(i)][size_t(j)], k);
          for (int m = 0; m < n; ++m) {
            acc = acc +
                  out.christoffel[size_t(l)][size_t(j)][size_t(m)] *
                      out.christoffel[size_t(m)][size_t(i)][size_t(k)] -
                  out.christoffel[size_t(l)][size_t(k)][size_t(m)] *
                      out.christoffel[size_t(m)][size_t(i)][size_t(j)];
          }
          out.riemann[size_t(l)][size_t(i)][size_t(j)][size_t(k)] = simplify(acc);
        }

  // Ric_ij = R^k_ikj
  out.ricci.assign(size_t(n), std::vector<Expr>(size_t(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Expr acc = zero_expr(chart);
      for (int k = 0; k < n; ++k)
        acc = acc + out.riemann[size_t(k)][size_t(i)][size_t(k)][size_t(j)];
      Expr r = simplify(acc);
      out.ricci[size_t(i)][size_t(j)] = r;
      out.ricci[size_t(j)][size_t(i)] = r;
    }

  Expr s = zero_expr(chart);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s = s + out.inverse_metric[size_t(i)][size_t(j)] * out.ricci[size_t(i)][size_t(j)];
  out.scal = simplify(s);

  // K = (1/(n−2)) (scal/(2(n−1)) g − Ric)
  Expr c1 = Expr::constant(chart, Rational(1, n - 2));
  Expr c2 = Expr::constant(chart, Rational(1, 2 * (n - 1)));
  out.schouten.assign(size_t(n), std::vector<Expr>(size_t(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Expr k = simplify(c1 * (c2 * out.scal * g.component(i, j) - out.ricci[size_t(i)][size_t(j)]));
      out.schouten[size_t(i)][size_t(j)] = k;
      out.schouten[size_t(j)][size_t(i)] = k;
    }
  return out;
}

VectorField covariant_derivative(const ChartMetric& g, const VectorField& X,
                                 const VectorField& Y) {
  const ChartPtr& chart = g.chart();
  int n = g.dim();
  const auto& gamma = g.curvature().christoffel;
  VectorField out = zero_field(chart);
  for (int k = 0; k < n; ++k) {
    Expr acc = zero_expr(chart);
    for (int i = 0; i < n; ++i) {
      if (X.comp[size_t(i)].is_zero()) continue;
      acc = acc + X.comp[size_t(i)] * differentiate(Y.comp[size_t(k)], i);
      for (int j = 0; j < n; ++j) {
        const Expr& G = gamma[size_t(k)][size_t(i)][size_t(j)];
        if (G.is_zero() || Y.comp[size_t(j)].is_zero()) continue;
        acc = acc + X.comp[size_t(i)] * G * Y.comp[size_t(j)];
      }
    }
    out.comp[size_t(k)] = simplify(acc);
  }
  return out;
}

VectorField lie_bracket(const ChartPtr& chart, const VectorField& X, const VectorField& Y) {
  int n = chart->dim();
  VectorField out = zero_field(chart);
  for (int k = 0; k < n; ++k) {
    Expr acc = zero_expr(chart);
    for (int i = 0; i < n; ++i) {
      if (!X.comp[size_t(i)].is_zero())
        acc = acc + X.comp[size_t(i)] * differentiate(Y.comp[size_t(k)], i);
      if (!Y.comp[size_t(i)].is_zero())
        acc = acc - Y.comp[size_t(i)] * differentiate(X.comp[size_t(k)], i);
    }
    out.comp[size_t(k)] = simplify(acc);
  }
  return out;
}

ChartMetric conformal_rescale(const ChartMetric& g, const Expr& sigma) {
  const ChartPtr& chart = g.chart();
  int n = g.dim();
  Expr factor = make_exp(Expr::constant(chart, Rational(2)) * sigma);
  std::vector<std::vector<Expr>> comp{size_t(n), std::vector<Expr>(size_t(n))};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      comp[size_t(i)][size_t(j)] = simplify(factor * g.component(i, j));
  return ChartMetric(chart, std::move(comp), g.p(), g.q(), g.bindings());
}

VectorField gradient(const ChartMetric& g, const Expr& sigma) {
  const ChartPtr& chart = g.chart();
  int n = g.dim();
  const auto& ginv = g.curvature().inverse_metric;
  VectorField out = zero_field(chart);
  for (int i = 0; i < n; ++i) {
    Expr acc = zero_expr(chart);
    for (int j = 0; j < n; ++j) {
      if (ginv[size_t(i)][size_t(j)].is_zero()) continue;
      acc = acc + ginv[size_t(i)][size_t(j)] * differentiate(sigma, j);
    }
    out.comp[size_t(i)] = simplify(acc);
  }
  return out;
}

VectorField rescaled_covariant_derivative(const ChartMetric& g, const Expr& sigma,
                                          const VectorField& X, const VectorField& A) {
  const ChartPtr& chart = g.chart();
  int n = g.dim();
  VectorField base = covariant_derivative(g, X, A);
  Expr dsX = zero_expr(chart);
  Expr dsA = zero_expr(chart);
  Expr gXA = zero_expr(chart);
  for (int i = 0; i < n; ++i) {
    dsX = dsX + differentiate(sigma, i) * X.comp[size_t(i)];
    dsA = dsA + differentiate(sigma, i) * A.comp[size_t(i)];
    for (int j = 0; j < n; ++j)
      gXA = gXA + g.component(i, j) * X.comp[size_t(i)] * A.comp[size_t(j)];
  }
  VectorField grad = gradient(g, sigma);
  VectorField out = zero_field(chart);
  for (int k = 0; k < n; ++k)
    out.comp[size_t(k)] = simplify(base.comp[size_t(k)] + dsX * A.comp[size_t(k)] +
                                   dsA * X.comp[size_t(k)] - gXA * grad.comp[size_t(k)]);
  return out;
}

ChartMetric diagonal_metric(ChartPtr chart, const std::vector<int>& signs) {
  int n = chart->dim();
  if (int(signs.size()) != n) throw std::invalid_argument("sign list size mismatch");
  std::vector<std::vector<Expr>> comp(size_t(n),
                                      std::vector<Expr>(size_t(n), zero_expr(chart)));
  int p = 0, q = 0;
  for (int i = 0; i < n; ++i) {
    comp[size_t(i)][size_t(i)] = Expr::constant(chart, Rational(signs[size_t(i)]));
    (signs[size_t(i)] < 0 ? p : q) += 1;
  }
  return ChartMetric(std::move(chart), std::move(comp), p, q);
}

}  // namespace tractorlab
