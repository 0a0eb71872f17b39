#include <cmath>

#include "tractorlab/spintractor.hpp"

namespace tractorlab {

std::vector<Expr> Frame::to_frame(const VectorField& X) const {
  int n = dim();
  std::vector<Expr> out(size_t(n), zero_expr(g->chart()));
  for (int i = 0; i < n; ++i) {
    Expr acc = zero_expr(g->chart());
    for (int d = 0; d < n; ++d) {
      if (dual[size_t(i)][size_t(d)].is_zero() || X.comp[size_t(d)].is_zero()) continue;
      acc = acc + dual[size_t(i)][size_t(d)] * X.comp[size_t(d)];
    }
    out[size_t(i)] = simplify(acc);
  }
  return out;
}

VectorField Frame::from_frame(const std::vector<Expr>& c) const {
  int n = dim();
  VectorField out = zero_field(g->chart());
  for (int d = 0; d < n; ++d) {
    Expr acc = zero_expr(g->chart());
    for (int i = 0; i < n; ++i) {
      if (c[size_t(i)].is_zero() || e[size_t(i)].comp[size_t(d)].is_zero()) continue;
      acc = acc + c[size_t(i)] * e[size_t(i)].comp[size_t(d)];
    }
    out.comp[size_t(d)] = simplify(acc);
  }
  return out;
}

Mat Frame::frame_matrix(const Point& p) const {
  int n = dim();
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.col(i) = e[size_t(i)].evaluate(p, bindings);
  return m;
}

namespace {

// Best rational approximation of x with bounded denominator; denominators are
// kept ≤ 1e6 so later exact products stay inside 64-bit rationals.
Rational approx_rational(double x, std::int64_t max_den = 1000000) {
  bool neg = x < 0;
  double v = std::abs(x);
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    std::int64_t a = std::int64_t(std::floor(frac));
    std::int64_t p2 = a * p1 + p0;
    std::int64_t q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = frac - std::floor(frac);
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  return Rational(neg ? -p1 : p1, q1 == 0 ? 1 : q1);
}

struct Builder {
  const ChartMetric& g;
  const ChartPtr& chart;
  Point base;
  Bindings bindings;
  int opaque_counter = 0;

  Expr inner_sym(const VectorField& u, const VectorField& v) const {
    Expr acc = zero_expr(chart);
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) {
        if (u.comp[size_t(i)].is_zero() || v.comp[size_t(j)].is_zero()) continue;
        acc = acc + g.component(i, j) * u.comp[size_t(i)] * v.comp[size_t(j)];
      }
    return simplify(acc);
  }

  VectorField scale(const VectorField& v, const Expr& c) const {
    VectorField out = zero_field(chart);
    for (int d = 0; d < g.dim(); ++d) out.comp[size_t(d)] = simplify(c * v.comp[size_t(d)]);
    return out;
  }

  VectorField combine(const VectorField& a, const Expr& ca, const VectorField& b,
                      const Expr& cb) const {
    VectorField out = zero_field(chart);
    for (int d = 0; d < g.dim(); ++d)
      out.comp[size_t(d)] = simplify(ca * a.comp[size_t(d)] + cb * b.comp[size_t(d)]);
    return out;
  }

  double at_base(const Expr& e) const { return e.evaluate(base, bindings); }

  // Opaque normalization factor f^{−1/2} with exact chain-rule derivatives
  // up to total order 3.
  Expr normalizer(const Expr& f) {
    int n = g.dim();
    std::string name = "frame_nrm" + std::to_string(opaque_counter++);
    std::vector<int> args(size_t(n), 0);
    for (int i = 0; i < n; ++i) args[size_t(i)] = i;
    auto d1 = std::make_shared<std::vector<Expr>>();
    auto d2 = std::make_shared<std::vector<Expr>>();
    auto d3 = std::make_shared<std::vector<Expr>>();
    for (int a = 0; a < n; ++a) d1->push_back(simplify(differentiate(f, a)));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) d2->push_back(simplify(differentiate((*d1)[size_t(a)], b)));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          d3->push_back(simplify(differentiate((*d2)[size_t(a * n + b)], c)));
    Expr f0 = f;
    Bindings inner_b = bindings;
    auto fn = [f0, d1, d2, d3, inner_b, n](const std::vector<double>& xs,
                                           const std::vector<int>& deriv) {
      Point p{xs};
      double fv = f0.evaluate(p, inner_b);
      if (fv <= 0) throw EvalError("frame normalization pivot changed sign");
      std::vector<int> idx;
      for (int a = 0; a < n; ++a)
        for (int k = 0; k < deriv[size_t(a)]; ++k) idx.push_back(a);
      auto f1 = [&](int a) { return (*d1)[size_t(a)].evaluate(p, inner_b); };
      auto f2 = [&](int a, int b) { return (*d2)[size_t(a * n + b)].evaluate(p, inner_b); };
      auto f3 = [&](int a, int b, int c) {
        return (*d3)[size_t((a * n + b) * n + c)].evaluate(p, inner_b);
      };
      double h12 = std::pow(fv, -0.5);
      switch (idx.size()) {
        case 0:
          return h12;
        case 1:
          return -0.5 * std::pow(fv, -1.5) * f1(idx[0]);
        case 2: {
          int a = idx[0], b = idx[1];
          return 0.75 * std::pow(fv, -2.5) * f1(a) * f1(b) -
                 0.5 * std::pow(fv, -1.5) * f2(a, b);
        }
        case 3: {
          int a = idx[0], b = idx[1], c = idx[2];
          return -15.0 / 8 * std::pow(fv, -3.5) * f1(a) * f1(b) * f1(c) +
                 0.75 * std::pow(fv, -2.5) *
                     (f2(a, b) * f1(c) + f2(a, c) * f1(b) + f2(b, c) * f1(a)) -
                 0.5 * std::pow(fv, -1.5) * f3(a, b, c);
        }
        default:
          throw EvalError("frame normalization derivative order above 3 requested");
      }
    };
    bindings.set(name, fn);
    return Expr::opaque(chart, name, args);
  }
};

}  // namespace

FramePtr build_frame(const MetricPtr& gp, const Point& base) {
  const ChartMetric& g = *gp;
  const ChartPtr& chart = g.chart();
  int n = g.dim();
  Builder bld{g, chart, base, g.bindings()};
  std::vector<VectorField> work;
  for (int d = 0; d < n; ++d) work.push_back(coordinate_field(chart, d));
  std::vector<std::pair<VectorField, int>> frame;  // (field, ε)

  auto orthogonalize_rest = [&](const VectorField& v, const Expr& nv) {
    for (VectorField& w : work) {
      Expr c = bld.inner_sym(w, v);
      if (c.is_zero()) continue;
      w = bld.combine(w, one_expr(chart), v, simplify(-(c / nv)));
    }
  };

  while (!work.empty()) {
    std::vector<Expr> norms;
    for (const VectorField& v : work) norms.push_back(bld.inner_sym(v, v));

    // (a) constant nonzero norm: exact (or near-exact) normalization
    int pick = -1;
    for (size_t i = 0; i < work.size(); ++i)
      if (norms[i].is_constant() && !norms[i].is_zero()) { pick = int(i); break; }
    if (pick >= 0) {
      VectorField v = work[size_t(pick)];
      Expr nv = norms[size_t(pick)];
      work.erase(work.begin() + pick);
      orthogonalize_rest(v, nv);
      Rational c = nv.constant_value();
      int sgn = c.num > 0 ? 1 : -1;
      Rational absc = sgn > 0 ? c : -c;
      if (absc.is_one()) {
        frame.emplace_back(v, sgn);
      } else {
        Rational r = approx_rational(1.0 / std::sqrt(absc.to_double()));
        frame.emplace_back(bld.scale(v, Expr::constant(chart, r)), sgn);
      }
      continue;
    }

    // (b/d) structurally null pivot: build an exact hyperbolic pair
    int nu = -1;
    for (size_t i = 0; i < work.size(); ++i)
      if (norms[i].is_zero()) { nu = int(i); break; }
    if (nu >= 0) {
      int partner = -1;
      Expr mu;
      // prefer a partner with constant pairing
      for (int pass = 0; pass < 2 && partner < 0; ++pass)
        for (size_t j = 0; j < work.size(); ++j) {
          if (int(j) == nu) continue;
          Expr m = bld.inner_sym(work[size_t(nu)], work[j]);
          bool usable = pass == 0 ? (m.is_constant() && !m.is_zero())
                                  : (!m.is_zero() && std::abs(bld.at_base(m)) > 1e-9);
          if (usable) { partner = int(j); mu = m; break; }
        }
      if (partner < 0)
        throw FrameError("frame construction: null direction with no pairing partner");
      VectorField u = work[size_t(nu)];
      VectorField w = work[size_t(partner)];
      if (nu > partner) std::swap(nu, partner);
      work.erase(work.begin() + partner);
      work.erase(work.begin() + nu);
      // null-ify the partner: w' = w − (g(w,w)/(2μ))·u, keeps g(u,w') = μ
      Expr nw = bld.inner_sym(w, w);
      if (!nw.is_zero())
        w = bld.combine(w, one_expr(chart), u,
                        simplify(-(nw / (Expr::constant(chart, Rational(2)) * mu))));
      // project the rest off span{u,w}: Gram = [[0,μ],[μ,0]]
      for (VectorField& r : work) {
        Expr cu = bld.inner_sym(r, u);
        Expr cw = bld.inner_sym(r, w);
        if (!cw.is_zero()) r = bld.combine(r, one_expr(chart), u, simplify(-(cw / mu)));
        if (!cu.is_zero()) r = bld.combine(r, one_expr(chart), w, simplify(-(cu / mu)));
      }
      Expr inv2mu = simplify(one_expr(chart) / (Expr::constant(chart, Rational(2)) * mu));
      frame.emplace_back(bld.combine(u, inv2mu, w, one_expr(chart)), 1);
      frame.emplace_back(bld.combine(u, inv2mu, w, Expr::constant(chart, Rational(-1))), -1);
      continue;
    }

    // (c) non-constant norm of constant sign: opaque normalization factor
    pick = -1;
    for (size_t i = 0; i < work.size(); ++i)
      if (std::abs(bld.at_base(norms[i])) > 1e-9) { pick = int(i); break; }
    if (pick < 0)
      throw FrameError("frame construction: all pivots degenerate near the base point");
    {
      VectorField v = work[size_t(pick)];
      Expr nv = norms[size_t(pick)];
      work.erase(work.begin() + pick);
      orthogonalize_rest(v, nv);
      int sgn = bld.at_base(nv) > 0 ? 1 : -1;
      Expr f = sgn > 0 ? nv : simplify(-nv);
      frame.emplace_back(bld.scale(v, bld.normalizer(f)), sgn);
    }
  }

  // ε = +1 block first, then ε = −1, preserving relative order
  auto out = std::make_shared<Frame>();
  out->g = gp;
  out->bindings = bld.bindings;
  for (int sgn : {1, -1})
    for (auto& [v, s] : frame)
      if (s == sgn) {
        out->e.push_back(v);
        out->eps.push_back(s);
      }
  if (int(out->e.size()) != n) throw FrameError("frame construction lost directions");

  // consistent orientation: flip the last field if the determinant is negative
  Mat m = out->frame_matrix(base);
  double det = m.determinant();
  if (std::abs(det) < 1e-12) throw FrameError("frame degenerate at the base point");
  if (det < 0)
    out->e.back() = bld.scale(out->e.back(), Expr::constant(chart, Rational(-1)));

  // dual basis by symbolic inversion of the frame matrix
  std::vector<std::vector<Expr>> em{size_t(n), std::vector<Expr>(size_t(n))};
  for (int d = 0; d < n; ++d)
    for (int i = 0; i < n; ++i) em[size_t(d)][size_t(i)] = out->e[size_t(i)].comp[size_t(d)];
  Expr det_sym = symbolic_det(chart, em);
  if (det_sym.is_zero()) throw FrameError("frame matrix symbolically singular");
  out->dual.assign(size_t(n), std::vector<Expr>(size_t(n)));
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < n; ++d) {
      std::vector<std::vector<Expr>> minor;
      for (int r = 0; r < n; ++r) {
        if (r == d) continue;
        std::vector<Expr> row;
        for (int c = 0; c < n; ++c)
          if (c != i) row.push_back(em[size_t(r)][size_t(c)]);
        minor.push_back(std::move(row));
      }
      Expr cof = symbolic_det(chart, minor);
      if ((i + d) % 2) cof = -cof;
      out->dual[size_t(i)][size_t(d)] = simplify(cof / det_sym);
    }
  return out;
}

}  // namespace tractorlab
