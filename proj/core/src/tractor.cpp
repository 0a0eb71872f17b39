#include "tractorlab/tractor.hpp"

#include <cmath>
#include <future>

#include "tractorlab/jobs.hpp"

namespace tractorlab {

namespace {

void require_gauge(const Tractor& t) {
  if (!t.gauge) throw std::invalid_argument("tractor has no gauge metric");
}

void require_same_gauge(const Tractor& u, const Tractor& v) {
  require_gauge(u);
  require_gauge(v);
  if (u.gauge != v.gauge)
    throw std::invalid_argument("tractor gauge mismatch; apply gauge_transform first");
}

}  // namespace

Tractor make_tractor(MetricPtr g, Expr alpha, VectorField Y, Expr beta) {
  if (!g) throw std::invalid_argument("tractor needs a gauge metric");
  if (Y.dim() != g->dim()) throw std::invalid_argument("tractor Y-slot dimension mismatch");
  return Tractor{std::move(alpha), std::move(Y), std::move(beta), std::move(g)};
}

Vec tractor_eval(const Tractor& t, const Point& p) {
  require_gauge(t);
  int n = t.gauge->dim();
  const Bindings& b = t.gauge->bindings();
  Vec v(n + 2);
  v[0] = t.alpha.evaluate(p, b);
  v.segment(1, n) = t.Y.evaluate(p, b);
  v[n + 1] = t.beta.evaluate(p, b);
  return v;
}

Expr tractor_inner(const Tractor& u, const Tractor& v) {
  require_same_gauge(u, v);
  const ChartMetric& g = *u.gauge;
  Expr acc = u.alpha * v.beta + v.alpha * u.beta;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      acc = acc + g.component(i, j) * u.Y.comp[size_t(i)] * v.Y.comp[size_t(j)];
  return simplify(acc);
}

Tractor tractor_connection_apply(const VectorField& X, const Tractor& t) {
  require_gauge(t);
  const ChartMetric& g = *t.gauge;
  const ChartPtr& chart = g.chart();
  int n = g.dim();
  const CurvatureBundle& c = g.curvature();

  Expr Xalpha = zero_expr(chart);
  Expr Xbeta = zero_expr(chart);
  Expr KXY = zero_expr(chart);
  Expr gXY = zero_expr(chart);
  for (int i = 0; i < n; ++i) {
    Xalpha = Xalpha + X.comp[size_t(i)] * differentiate(t.alpha, i);
    Xbeta = Xbeta + X.comp[size_t(i)] * differentiate(t.beta, i);
    for (int j = 0; j < n; ++j) {
      KXY = KXY + c.schouten[size_t(i)][size_t(j)] * X.comp[size_t(i)] * t.Y.comp[size_t(j)];
      gXY = gXY + g.component(i, j) * X.comp[size_t(i)] * t.Y.comp[size_t(j)];
    }
  }
  // K(X)♯^k = g^{kl} K_{li} X^i
  VectorField KXsharp = zero_field(chart);
  for (int k = 0; k < n; ++k) {
    Expr acc = zero_expr(chart);
    for (int l = 0; l < n; ++l) {
      if (c.inverse_metric[size_t(k)][size_t(l)].is_zero()) continue;
      for (int i = 0; i < n; ++i)
        acc = acc + c.inverse_metric[size_t(k)][size_t(l)] * c.schouten[size_t(l)][size_t(i)] *
                        X.comp[size_t(i)];
    }
    KXsharp.comp[size_t(k)] = acc;
  }
  VectorField nXY = covariant_derivative(g, X, t.Y);
  VectorField mid = zero_field(chart);
  for (int k = 0; k < n; ++k)
    mid.comp[size_t(k)] = simplify(nXY.comp[size_t(k)] + t.alpha * X.comp[size_t(k)] -
                                   t.beta * KXsharp.comp[size_t(k)]);
  return Tractor{simplify(Xalpha + KXY), mid, simplify(Xbeta - gXY), t.gauge};
}

Tractor gauge_transform(const Tractor& t, const Expr& sigma, MetricPtr rescaled) {
  require_gauge(t);
  const ChartMetric& g = *t.gauge;
  const ChartPtr& chart = g.chart();
  int n = g.dim();
  VectorField grad = gradient(g, sigma);
  Expr Ysig = zero_expr(chart);
  Expr norm2 = zero_expr(chart);
  for (int i = 0; i < n; ++i) {
    Expr ds = differentiate(sigma, i);
    Ysig = Ysig + ds * t.Y.comp[size_t(i)];
    norm2 = norm2 + ds * grad.comp[size_t(i)];
  }
  Expr em = make_exp(-sigma);
  Expr ep = make_exp(sigma);
  Expr half = Expr::constant(chart, Rational(1, 2));
  Expr alpha = simplify(em * (t.alpha - Ysig - half * t.beta * norm2));
  VectorField Y = zero_field(chart);
  for (int i = 0; i < n; ++i)
    Y.comp[size_t(i)] = simplify(em * (t.Y.comp[size_t(i)] + t.beta * grad.comp[size_t(i)]));
  Expr beta = simplify(ep * t.beta);
  if (!rescaled) rescaled = std::make_shared<const ChartMetric>(conformal_rescale(g, sigma));
  return Tractor{alpha, Y, beta, std::move(rescaled)};
}

Tractor gauge_transform(const Tractor& t, const Expr& sigma) {
  return gauge_transform(t, sigma, nullptr);
}

Mat gauge_matrix(const ChartMetric& g, const Expr& sigma, const Point& p) {
  int n = g.dim();
  const Bindings& b = g.bindings();
  double s = sigma.evaluate(p, b);
  VectorField gradf = gradient(g, sigma);
  Vec grad = gradf.evaluate(p, b);
  Vec ds(n);
  for (int i = 0; i < n; ++i) ds[i] = differentiate(sigma, i).evaluate(p, b);
  double norm2 = ds.dot(grad);
  double em = std::exp(-s), ep = std::exp(s);
  Mat m = Mat::Zero(n + 2, n + 2);
  m(0, 0) = em;
  for (int j = 0; j < n; ++j) m(0, 1 + j) = -em * ds[j];
  m(0, n + 1) = -em * norm2 / 2;
  for (int i = 0; i < n; ++i) {
    m(1 + i, 1 + i) = em;
    m(1 + i, n + 1) = em * grad[i];
  }
  m(n + 1, n + 1) = ep;
  return m;
}

Mat tractor_connection_matrix(const ChartMetric& g, int d, const Point& p) {
  int n = g.dim();
  const Bindings& b = g.bindings();
  const CurvatureBundle& c = g.curvature();
  Mat gm = g.evaluate(p);
  Mat K(n, n), Gi(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      K(i, j) = c.schouten[size_t(i)][size_t(j)].evaluate(p, b);
      Gi(i, j) = c.inverse_metric[size_t(i)][size_t(j)].evaluate(p, b);
    }
  Mat m = Mat::Zero(n + 2, n + 2);
  for (int j = 0; j < n; ++j) m(0, 1 + j) = K(d, j);
  Vec Kdsharp = Gi * K.col(d);
  for (int k = 0; k < n; ++k) {
    m(1 + k, 0) = (k == d) ? 1 : 0;
    for (int j = 0; j < n; ++j)
      m(1 + k, 1 + j) = c.christoffel[size_t(k)][size_t(d)][size_t(j)].evaluate(p, b);
    m(1 + k, n + 1) = -Kdsharp[k];
  }
  for (int j = 0; j < n; ++j) m(n + 1, 1 + j) = -gm(d, j);
  return m;
}

Mat tractor_gram(const ChartMetric& g, const Point& p) {
  int n = g.dim();
  Mat G = Mat::Zero(n + 2, n + 2);
  G(0, n + 1) = G(n + 1, 0) = 1;
  G.block(1, 1, n, n) = g.evaluate(p);
  return G;
}

Vec tractor_parallel_transport(const ChartMetric& g, const Curve& curve, const Vec& t0,
                               const TransportOptions& opt) {
  int n = g.dim();
  if (t0.size() != n + 2) throw std::invalid_argument("tractor dimension mismatch");
  auto rhs = [&](const Point& pos, const Vec& vel) {
    Mat A = Mat::Zero(n + 2, n + 2);
    for (int d = 0; d < n; ++d) {
      if (vel[d] == 0) continue;
      A -= vel[d] * tractor_connection_matrix(g, d, pos);
    }
    return A;
  };
  return rk4_linear_transport(g, curve, t0, rhs, opt);
}

std::vector<std::pair<std::string, Curve>> default_loops(const ChartPtr& chart,
                                                         const Point& base, double eps) {
  std::vector<std::pair<std::string, Curve>> loops;
  for (int i = 0; i < chart->dim(); ++i)
    for (int j = i + 1; j < chart->dim(); ++j)
      loops.emplace_back("rect_" + chart->name(i) + "_" + chart->name(j),
                         rectangle_loop(base, i, j, eps));
  return loops;
}

HolonomySample holonomy_sample(const ChartMetric& g, const Point& base,
                               const std::vector<std::pair<std::string, Curve>>& loops,
                               const TransportOptions& opt) {
  int n = g.dim();
  g.curvature();  // force the (non-thread-safe) lazy computation up front
  Mat G = tractor_gram(g, base);
  auto run_loop = [&](const Curve& curve) {
    Mat M(n + 2, n + 2);
    for (int c = 0; c < n + 2; ++c) {
      Vec e = Vec::Unit(n + 2, c);
      M.col(c) = tractor_parallel_transport(g, curve, e, opt);
    }
    return M;
  };
  HolonomySample out;
  out.base = base;
  const size_t cap = size_t(std::max(1, thread_cap()));
  for (size_t start = 0; start < loops.size(); start += cap) {
    size_t stop = std::min(loops.size(), start + cap);
    std::vector<std::future<Mat>> futs;
    for (size_t i = start; i < stop; ++i)
      futs.push_back(std::async(std::launch::async, run_loop, loops[i].second));
    for (size_t i = start; i < stop; ++i) {
      Mat M = futs[i - start].get();
      double res = (M.transpose() * G * M - G).cwiseAbs().maxCoeff();
      out.loops.push_back(LoopTranscript{loops[i].first, M, res});
    }
  }
  return out;
}

CheckReport verify_invariant_lightlike(const MetricPtr& g, const TractorDistribution& H,
                                       const CheckOptions& opt, bool require_lightlike) {
  if (H.generators.empty()) throw std::invalid_argument("empty tractor distribution");
  for (const Tractor& h : H.generators)
    if (h.gauge != g) throw std::invalid_argument("tractor gauge mismatch");
  int n = g->dim();
  int k = H.rank();
  // ∇^nc_{∂_d} h, symbolic, for every direction and generator
  std::vector<std::vector<Tractor>> deriv;
  for (int d = 0; d < n; ++d) {
    VectorField X = coordinate_field(g->chart(), d);
    std::vector<Tractor> row;
    for (const Tractor& h : H.generators) row.push_back(tractor_connection_apply(X, h));
    deriv.push_back(std::move(row));
  }
  std::vector<Expr> inners;
  if (require_lightlike)
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j)
        inners.push_back(tractor_inner(H.generators[size_t(i)], H.generators[size_t(j)]));

  CheckReport rep;
  rep.check = "invariant_lightlike";
  rep.samples = opt.samples;
  rep.tolerance = opt.tolerance;
  PointSampler sampler(g->chart(), opt.seed);
  for (int s = 0; s < opt.samples; ++s) {
    Point p = sampler.next();
    Mat B(n + 2, k);
    for (int c = 0; c < k; ++c) B.col(c) = tractor_eval(H.generators[size_t(c)], p);
    if (numeric_rank(B) < k) {
      rep.singular_points.push_back(p);
      continue;
    }
    for (const Expr& ip : inners)
      rep.record(p, std::abs(ip.evaluate(p, g->bindings())));
    for (int d = 0; d < n; ++d)
      for (const Tractor& dh : deriv[size_t(d)])
        rep.record(p, span_residual(B, tractor_eval(dh, p)));
  }
  rep.finalize();
  return rep;
}

TractorDistribution build_H_from_L(const MetricPtr& g, const Distribution& L) {
  // L must be totally lightlike w.r.t. g
  PointSampler sampler(g->chart(), 1);
  for (int s = 0; s < 32; ++s) {
    Point p = sampler.next();
    for (const VectorField& a : L.generators)
      for (const VectorField& b : L.generators)
        if (std::abs(g->inner(a, b, p)) > 1e-9)
          throw std::invalid_argument("distribution is not totally lightlike");
  }
  TractorDistribution H;
  Expr z = zero_expr(g->chart());
  for (const VectorField& K : L.generators)
    H.generators.push_back(make_tractor(g, z, K, z));
  H.generators.push_back(make_tractor(g, z, zero_field(g->chart()), one_expr(g->chart())));
  return H;
}

namespace {

// Best rational approximation with bounded denominator (continued fractions).
Rational rationalize(double x, std::int64_t max_den = 1000000) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot rationalize non-finite value");
  bool neg = x < 0;
  double v = std::abs(x);
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(frac);
    if (fl > double(std::numeric_limits<std::int64_t>::max() / 4)) break;
    std::int64_t a = std::int64_t(fl);
    std::int64_t p2 = a * p1 + p0;
    std::int64_t q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = frac - fl;
    if (rem < 1e-14) break;
    frac = 1.0 / rem;
  }
  return Rational(neg ? -p1 : p1, q1 == 0 ? 1 : q1);
}

}  // namespace

ProjectedDistribution project_L_from_H(const MetricPtr& g, const TractorDistribution& H,
                                       const CheckOptions& opt) {
  for (const Tractor& h : H.generators)
    if (h.gauge != g) throw std::invalid_argument("tractor gauge mismatch");
  int n = g->dim();
  int k = H.rank();
  PointSampler sampler(g->chart(), opt.seed);
  std::vector<Point> pts;
  Mat S(opt.samples, k);  // β values of the generators per sample point
  ProjectedDistribution out;
  double beta_scale = 0;
  for (int s = 0; s < opt.samples; ++s) {
    Point p = sampler.next();
    pts.push_back(p);
    Mat B(n + 2, k);
    for (int c = 0; c < k; ++c) B.col(c) = tractor_eval(H.generators[size_t(c)], p);
    S.row(s) = B.row(n + 1);
    beta_scale = std::max(beta_scale, S.row(s).cwiseAbs().maxCoeff());
    // pointwise intersection rank: k − rank(β row); singular unless k−1
    Mat Np = nullspace(S.row(s));
    Mat Lp = B.middleRows(1, n) * Np;
    if (Np.cols() != k - 1 || numeric_rank(Lp) < k - 1) out.singular_points.push_back(p);
  }
  if (beta_scale < 1e-12)
    throw std::invalid_argument(
        "tractor distribution lies in the orthogonal complement of the null line "
        "everywhere; projection is rank-deficient");
  // constant-coefficient combinations with β ≡ 0 on the whole sample set
  Mat N = nullspace(S);
  if (N.cols() != k - 1)
    throw std::runtime_error("could not fit smooth generators: β-nullspace has rank " +
                             std::to_string(N.cols()) + ", expected " + std::to_string(k - 1));
  const ChartPtr& chart = g->chart();
  for (int c = 0; c < N.cols(); ++c) {
    // snap coefficients to rationals (they are exact for corpus inputs)
    Vec col = N.col(c);
    double lead = col.cwiseAbs().maxCoeff();
    VectorField gen = zero_field(chart);
    Expr alpha = zero_expr(chart);
    for (int i = 0; i < k; ++i) {
      Rational ci = rationalize(col[i] / lead);
      if (ci.is_zero()) continue;
      Expr cexpr = Expr::constant(chart, ci);
      for (int d = 0; d < n; ++d)
        gen.comp[size_t(d)] =
            gen.comp[size_t(d)] + cexpr * H.generators[size_t(i)].Y.comp[size_t(d)];
    }
    for (int d = 0; d < n; ++d) gen.comp[size_t(d)] = simplify(gen.comp[size_t(d)]);
    out.L.generators.push_back(std::move(gen));
  }
  // validate the snap: β of each fitted combination vanishes on the samples
  for (int c = 0; c < N.cols(); ++c) {
    Expr beta = zero_expr(chart);
    Vec col = N.col(c);
    double lead = col.cwiseAbs().maxCoeff();
    for (int i = 0; i < k; ++i) {
      Rational ci = rationalize(col[i] / lead);
      beta = beta + Expr::constant(chart, ci) * H.generators[size_t(i)].beta;
    }
    beta = simplify(beta);
    for (const Point& p : pts)
      if (std::abs(beta.evaluate(p, g->bindings())) > opt.tolerance)
        throw std::runtime_error("smooth-generator fit failed the β ≡ 0 validation");
  }
  return out;
}

}  // namespace tractorlab
