#include <cmath>

#include "tractorlab/geometry.hpp"

namespace tractorlab {

namespace {

// Generator matrix of L at a point; columns are the generators.
Mat span_matrix(const Distribution& L, const Point& p, const Bindings& b) {
  int n = L.generators.front().dim();
  Mat B(n, L.rank());
  for (int c = 0; c < L.rank(); ++c)
    B.col(c) = L.generators[size_t(c)].evaluate(p, b);
  return B;
}

// Shared sampling loop: evaluates `residuals_at` at each sample point unless
// the generator matrix degenerates there.
CheckReport run_membership_check(
    const ChartMetric& g, const Distribution& L, const CheckOptions& opt,
    const std::string& name,
    const std::function<void(const Point&, const Mat&, CheckReport&)>& residuals_at) {
  if (L.generators.empty()) throw std::invalid_argument("empty distribution");
  CheckReport rep;
  rep.check = name;
  rep.samples = opt.samples;
  rep.tolerance = opt.tolerance;
  PointSampler sampler(g.chart(), opt.seed);
  for (int s = 0; s < opt.samples; ++s) {
    Point p = sampler.next();
    Mat B = span_matrix(L, p, g.bindings());
    if (numeric_rank(B) < L.rank()) {
      rep.singular_points.push_back(p);
      continue;
    }
    residuals_at(p, B, rep);
  }
  rep.finalize();
  return rep;
}

}  // namespace

CheckReport check_distribution_parallel(const ChartMetric& g, const Distribution& L,
                                        const CheckOptions& opt) {
  int n = g.dim();
  // ∇_{∂_d} K_i precomputed symbolically for every direction and generator
  std::vector<std::vector<VectorField>> deriv{size_t(n)};
  for (int d = 0; d < n; ++d) {
    VectorField X = coordinate_field(g.chart(), d);
    for (const VectorField& K : L.generators)
      deriv[size_t(d)].push_back(covariant_derivative(g, X, K));
  }
  return run_membership_check(
      g, L, opt, "distribution_parallel",
      [&](const Point& p, const Mat& B, CheckReport& rep) {
        for (int d = 0; d < n; ++d)
          for (const VectorField& dK : deriv[size_t(d)])
            rep.record(p, span_residual(B, dK.evaluate(p, g.bindings())));
      });
}

namespace {

CheckReport image_check(const ChartMetric& g, const Distribution& L, const CheckOptions& opt,
                        const std::string& name,
                        const std::vector<std::vector<Expr>>& tensor) {
  int n = g.dim();
  const auto& ginv = g.curvature().inverse_metric;
  return run_membership_check(
      g, L, opt, name, [&](const Point& p, const Mat& B, CheckReport& rep) {
        Mat T(n, n), Gi(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            T(i, j) = tensor[size_t(i)][size_t(j)].evaluate(p, g.bindings());
            Gi(i, j) = ginv[size_t(i)][size_t(j)].evaluate(p, g.bindings());
          }
        Mat sharp = Gi * T;  // column i is T(e_i)♯
        for (int i = 0; i < n; ++i) rep.record(p, span_residual(B, sharp.col(i)));
      });
}

}  // namespace

CheckReport check_ricci_image(const ChartMetric& g, const Distribution& L,
                              const CheckOptions& opt) {
  return image_check(g, L, opt, "ricci_image", g.curvature().ricci);
}

CheckReport check_schouten_image(const ChartMetric& g, const Distribution& L,
                                 const CheckOptions& opt) {
  return image_check(g, L, opt, "schouten_image", g.curvature().schouten);
}

CheckReport check_integrable(const ChartMetric& g, const Distribution& L,
                             const CheckOptions& opt) {
  std::vector<VectorField> brackets;
  for (size_t i = 0; i < L.generators.size(); ++i)
    for (size_t j = i + 1; j < L.generators.size(); ++j)
      brackets.push_back(lie_bracket(g.chart(), L.generators[i], L.generators[j]));
  return run_membership_check(
      g, L, opt, "integrable", [&](const Point& p, const Mat& B, CheckReport& rep) {
        if (brackets.empty()) {
          rep.record(p, 0.0);
          return;
        }
        for (const VectorField& br : brackets)
          rep.record(p, span_residual(B, br.evaluate(p, g.bindings())));
      });
}

std::function<double(const Point&)> poincare_potential(const ChartPtr& chart,
                                                       const OneForm& theta,
                                                       const Point& base,
                                                       const Bindings& bindings,
                                                       double closed_tol,
                                                       std::uint64_t seed) {
  int n = chart->dim();
  if (theta.dim() != n) throw std::invalid_argument("one-form dimension mismatch");
  // closedness: ∂_i θ_j − ∂_j θ_i = 0 at sample points
  std::vector<std::vector<Expr>> dtheta{size_t(n), std::vector<Expr>(size_t(n))};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      dtheta[size_t(i)][size_t(j)] = simplify(differentiate(theta.comp[size_t(j)], i) -
                                              differentiate(theta.comp[size_t(i)], j));
  PointSampler sampler(chart, seed);
  for (int s = 0; s < 32; ++s) {
    Point p = sampler.next();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double r = std::abs(dtheta[size_t(i)][size_t(j)].evaluate(p, bindings));
        if (r > closed_tol)
          throw EvalError("one-form is not closed (residual " + std::to_string(r) + ")");
      }
  }
  auto comps = std::make_shared<std::vector<Expr>>(theta.comp);
  Bindings b = bindings;
  return [comps, base, b, n](const Point& target) {
    if (target.dim() != n) throw std::invalid_argument("point dimension mismatch");
    // integrate leg by leg along the axis-parallel polyline base -> target,
    // composite Simpson per leg
    double total = 0;
    Point cur = base;
    const int segs = 64;
    for (int c = 0; c < n; ++c) {
      double a = cur.x[size_t(c)];
      double bnd = target.x[size_t(c)];
      if (a != bnd) {
        double h = (bnd - a) / (2.0 * segs);
        double acc = 0;
        for (int s = 0; s <= 2 * segs; ++s) {
          Point p = cur;
          p.x[size_t(c)] = a + s * h;
          double f = (*comps)[size_t(c)].evaluate(p, b);
          double w = (s == 0 || s == 2 * segs) ? 1 : (s % 2 ? 4 : 2);
          acc += w * f;
        }
        total += acc * h / 3.0;
      }
      cur.x[size_t(c)] = bnd;
    }
    return total;
  };
}

}  // namespace tractorlab
