#include "tractorlab/walker.hpp"

#include <cmath>
#include <sstream>

namespace tractorlab {

namespace {

// Structural dependence on a coordinate: Symbol index or opaque argument list.
bool depends_on(const Expr& e, int coord) {
  if (!e.valid()) return false;
  const ExprNode& n = e.node();
  if (n.kind == NodeKind::Symbol) return n.symbol == coord;
  if (n.kind == NodeKind::Opaque)
    for (int a : n.args)
      if (a == coord) return true;
  for (const Expr& k : n.kids)
    if (depends_on(k, coord)) return true;
  return false;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  return simplify(a - b).is_zero();
}

void require_shape(const std::vector<std::vector<Expr>>& m, int rows, int cols,
                   const char* name) {
  if (int(m.size()) != rows)
    throw std::invalid_argument(std::string("block ") + name + " has the wrong row count");
  for (const auto& row : m)
    if (int(row.size()) != cols)
      throw std::invalid_argument(std::string("block ") + name + " has the wrong column count");
  for (const auto& row : m)
    for (const Expr& e : row)
      if (!e.valid())
        throw std::invalid_argument(std::string("block ") + name +
                                    " contains an uninitialized expression");
}

void require_symmetric(const std::vector<std::vector<Expr>>& m, const char* name) {
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = i + 1; j < m.size(); ++j)
      if (!structurally_equal(m[i][j], m[j][i]))
        throw std::invalid_argument(std::string("block ") + name + " is not symmetric");
}

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

}  // namespace

Point chart_center(const ChartPtr& chart) {
  Point p;
  p.x.resize(size_t(chart->dim()));
  for (int i = 0; i < chart->dim(); ++i) {
    auto [lo, hi] = chart->sample_box(i);
    p.x[size_t(i)] = 0.5 * (lo + hi);
  }
  return p;
}

WalkerBuild build_walker(const WalkerSpec& spec) {
  const int n = spec.n, r = spec.r;
  if (!spec.chart || spec.chart->dim() != n)
    throw std::invalid_argument("walker chart dimension does not match n");
  if (r < 1 || n < 2 * r)
    throw std::invalid_argument("walker rank r must satisfy 1 <= r <= n/2");
  const int mid = n - 2 * r;
  require_shape(spec.A, mid, mid, "A");
  require_shape(spec.H, mid, r, "H");
  require_shape(spec.B, r, r, "B");
  require_symmetric(spec.A, "A");
  require_symmetric(spec.B, "B");
  for (int c = 0; c < r; ++c) {
    for (const auto& row : spec.A)
      for (const Expr& e : row)
        if (depends_on(e, c))
          throw std::invalid_argument("block A depends on " + spec.chart->name(c));
    for (const auto& row : spec.H)
      for (const Expr& e : row)
        if (depends_on(e, c))
          throw std::invalid_argument("block H depends on " + spec.chart->name(c));
  }

  const ChartPtr& chart = spec.chart;
  std::vector<std::vector<Expr>> comp{size_t(n), std::vector<Expr>{size_t(n), Expr()}};
  for (auto& row : comp)
    for (Expr& e : row) e = zero_expr(chart);
  for (int i = 0; i < r; ++i) {
    comp[size_t(i)][size_t(n - r + i)] = one_expr(chart);
    comp[size_t(n - r + i)][size_t(i)] = one_expr(chart);
  }
  for (int i = 0; i < mid; ++i)
    for (int j = 0; j < mid; ++j)
      comp[size_t(r + i)][size_t(r + j)] = spec.A[size_t(i)][size_t(j)];
  for (int i = 0; i < mid; ++i)
    for (int j = 0; j < r; ++j) {
      comp[size_t(r + i)][size_t(n - r + j)] = spec.H[size_t(i)][size_t(j)];
      comp[size_t(n - r + j)][size_t(r + i)] = spec.H[size_t(i)][size_t(j)];
    }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      comp[size_t(n - r + i)][size_t(n - r + j)] = spec.B[size_t(i)][size_t(j)];

  // Signature from the inertia at the chart center.
  Point c0 = chart_center(chart);
  Mat M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M(i, j) = comp[size_t(i)][size_t(j)].evaluate(c0, spec.bindings);
  Inertia in = inertia_of(M);
  if (in.null_count > 0)
    throw std::invalid_argument("walker metric is degenerate at the chart center");

  WalkerBuild out;
  out.g = std::make_shared<ChartMetric>(chart, comp, in.neg, in.pos, spec.bindings);
  for (int i = 0; i < r; ++i) out.L.generators.push_back(coordinate_field(chart, i));
  return out;
}

PureWalkerBuild build_pure_walker(const PureWalkerSpec& spec, const CheckOptions& opt) {
  const int m = spec.m;
  if (m < 1) throw std::invalid_argument("pure walker rank m must be positive");
  const int n = 2 * m + (spec.omit_z ? 0 : 1);
  if (!spec.chart || spec.chart->dim() != n)
    throw std::invalid_argument("pure walker chart dimension does not match m");
  require_shape(spec.gij, m, m, "g_ij");
  require_symmetric(spec.gij, "g_ij");
  for (int k = 0; k < m; ++k) {
    Expr div = zero_expr(spec.chart);
    for (int i = 0; i < m; ++i) div = div + differentiate(spec.gij[size_t(i)][size_t(k)], i);
    if (!simplify(div).is_zero()) {
      std::ostringstream msg;
      msg << "divergence constraint violated for column k=" << (k + 1);
      throw std::invalid_argument(msg.str());
    }
  }

  const ChartPtr& chart = spec.chart;
  std::vector<std::vector<Expr>> comp{size_t(n), std::vector<Expr>{size_t(n), Expr()}};
  for (auto& row : comp)
    for (Expr& e : row) e = zero_expr(chart);
  for (int i = 0; i < m; ++i) {
    Expr c = Expr::constant(chart, Rational(-2));
    comp[size_t(i)][size_t(m + i)] = c;
    comp[size_t(m + i)][size_t(i)] = c;
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      comp[size_t(m + i)][size_t(m + j)] = simplify(spec.gij[size_t(i)][size_t(j)] * Rational(-4));
  if (!spec.omit_z)
    comp[size_t(2 * m)][size_t(2 * m)] = Expr::constant(chart, Rational(-1));

  const int p = m + (spec.omit_z ? 0 : 1), q = m;
  PureWalkerBuild out;
  out.g = std::make_shared<ChartMetric>(chart, comp, p, q, spec.bindings);
  Point base = chart_center(chart);
  out.frame = build_frame(out.g, base);
  out.rep = std::make_shared<const CliffordRep>(build_clifford(p, q));
  const int N = out.rep->N;

  // ∇_{∂_d} of each constant basis spinor, symbolically; columns of M_d.
  std::vector<std::vector<std::vector<Expr>>> nab{
      size_t(n), std::vector<std::vector<Expr>>(size_t(N))};
  for (int d = 0; d < n; ++d)
    for (int k = 0; k < N; ++k) {
      std::vector<Expr> e{size_t(N), Expr()};
      for (int c = 0; c < N; ++c) e[size_t(c)] = zero_expr(chart);
      e[size_t(k)] = one_expr(chart);
      SpinorField bk = make_spinor_field(out.g, out.rep, out.frame, std::move(e));
      nab[size_t(d)][size_t(k)] =
          spinor_covariant_derivative(bk, coordinate_field(chart, d)).comp;
    }

  // Constant-coefficient ansatz: u with M_d(x)·u = 0 at every sample.
  PointSampler sampler(chart, opt.seed);
  const int S = std::max(8, std::min(opt.samples, 32));
  Mat stacked(S * n * N, N);
  for (int s = 0; s < S; ++s) {
    Point pt = sampler.next();
    for (int d = 0; d < n; ++d)
      for (int k = 0; k < N; ++k)
        for (int c = 0; c < N; ++c)
          stacked((s * n + d) * N + c, k) =
              nab[size_t(d)][size_t(k)][size_t(c)].evaluate(pt, out.frame->bindings);
  }
  Mat fitted = rref_span(nullspace(stacked));

  // Candidate list: fitted generators plus their half-spinor projections.
  std::vector<Vec> candidates;
  for (Eigen::Index c = 0; c < fitted.cols(); ++c) {
    Vec u = fitted.col(c);
    candidates.push_back(u);
    if (out.rep->has_half_split()) {
      Vec up = out.rep->proj_plus.cast<double>() * u;
      Vec um = out.rep->proj_minus.cast<double>() * u;
      if (up.lpNorm<Eigen::Infinity>() > 1e-9) candidates.push_back(up);
      if (um.lpNorm<Eigen::Infinity>() > 1e-9) candidates.push_back(um);
    }
  }

  // Prefer the pure candidate whose kernel at the base point is the normal
  // form's canonical distribution span(∂x_1,…,∂x_m). Solve for it inside the
  // fitted parallel space: γ(∂x_i)·u = 0 at the base for i ≤ m.
  Mat canonical = Mat::Zero(n, m);
  for (int i = 0; i < m; ++i) canonical(i, i) = 1;
  if (fitted.cols() > 0) {
    Mat constraint(m * N, fitted.cols());
    for (int i = 0; i < m; ++i) {
      Mat act = Mat::Zero(N, N);
      for (int j = 0; j < n; ++j) {
        double cj = out.frame->dual[size_t(j)][size_t(i)].evaluate(base, out.frame->bindings);
        if (cj != 0) act += cj * out.rep->gamma[size_t(j)].cast<double>();
      }
      constraint.middleRows(i * N, N) = act * fitted;
    }
    Mat coef = nullspace(constraint);
    Mat sols = rref_span(fitted * coef);
    for (Eigen::Index c = sols.cols() - 1; c >= 0; --c)
      candidates.insert(candidates.begin(), sols.col(c));
  }
  bool found = false, canonical_found = false;
  for (const Vec& cand : candidates) {
    if (canonical_found) break;
    Vec u = cand / cand.cwiseAbs().maxCoeff();
    std::vector<Expr> ucomp{size_t(N), Expr()};
    for (int k = 0; k < N; ++k)
      ucomp[size_t(k)] = Expr::constant(chart, approx_rational(u[k]));
    Chirality ch = Chirality::Full;
    if (out.rep->has_half_split()) {
      if ((out.rep->proj_plus.cast<double>() * u - u).lpNorm<Eigen::Infinity>() < 1e-9)
        ch = Chirality::Plus;
      else if ((out.rep->proj_minus.cast<double>() * u - u).lpNorm<Eigen::Infinity>() < 1e-9)
        ch = Chirality::Minus;
    }
    SpinorField phi = make_spinor_field(out.g, out.rep, out.frame, ucomp, ch);
    Mat ker = spinor_kernel_at(phi, base);
    if (numeric_rank(ker) != m) continue;  // not pure
    canonical_found = span_distance(ker, canonical) < 1e-8;
    if (canonical_found || !found) out.phi = phi;
    found = true;
  }
  if (!found)
    throw std::runtime_error("no parallel pure spinor found in the constant-coefficient ansatz");

  // Certify ∇φ = 0 on fresh samples.
  out.certification.check = "parallel_spinor";
  out.certification.tolerance = opt.tolerance;
  out.certification.samples = opt.samples;
  std::vector<std::vector<Expr>> res{size_t(n), std::vector<Expr>(size_t(N))};
  for (int d = 0; d < n; ++d)
    res[size_t(d)] =
        spinor_covariant_derivative(out.phi, coordinate_field(chart, d)).comp;
  PointSampler fresh(chart, opt.seed + 1);
  for (int s = 0; s < opt.samples; ++s) {
    Point pt = fresh.next();
    double worst = 0;
    for (int d = 0; d < n; ++d)
      for (int c = 0; c < N; ++c)
        worst = std::max(worst,
                         std::abs(res[size_t(d)][size_t(c)].evaluate(pt, out.frame->bindings)));
    out.certification.record(pt, worst);
  }
  out.certification.finalize();

  out.L = spinor_kernel_distribution(out.phi, opt);
  return out;
}

RicciIsotropicReport validate_ricci_isotropic(const MetricPtr& g, const Distribution& L,
                                              const CheckOptions& opt) {
  RicciIsotropicReport rep;
  rep.parallel = check_distribution_parallel(*g, L, opt);
  rep.ricci_image = check_ricci_image(*g, L, opt);
  const Expr& scal = g->curvature().scal;
  PointSampler sampler(g->chart(), opt.seed);
  for (int s = 0; s < opt.samples; ++s) {
    Point pt = sampler.next();
    rep.max_scal = std::max(rep.max_scal, std::abs(scal.evaluate(pt, g->bindings())));
  }
  rep.scal_zero = rep.max_scal < 1e-6;
  rep.pass = rep.parallel.pass && rep.ricci_image.pass && rep.scal_zero;
  return rep;
}

}  // namespace tractorlab
