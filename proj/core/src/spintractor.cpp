#include <map>
#include <mutex>

#include "tractorlab/spintractor.hpp"

namespace tractorlab {

namespace {

Expr inner_sym(const ChartMetric& g, const VectorField& u, const VectorField& v) {
  Expr acc = zero_expr(g.chart());
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) {
      if (u.comp[size_t(i)].is_zero() || v.comp[size_t(j)].is_zero()) continue;
      acc = acc + g.component(i, j) * u.comp[size_t(i)] * v.comp[size_t(j)];
    }
  return simplify(acc);
}

// Spin-connection one-forms ω_{ij,d} = g(∇_{∂_d} e_i, e_j), cached per frame.
struct SpinCoeffs {
  std::vector<std::vector<std::vector<Expr>>> omega;  // [d][i][j], i < j
};

std::shared_ptr<const SpinCoeffs> spin_coeffs(const FramePtr& frame) {
  static std::mutex mu;
  // weak keys: a recycled Frame address must not hit a stale entry
  static std::map<const Frame*,
                  std::pair<std::weak_ptr<const Frame>, std::shared_ptr<const SpinCoeffs>>>
      cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(frame.get());
    if (it != cache.end() && it->second.first.lock() == frame) return it->second.second;
  }
  const ChartMetric& g = *frame->g;
  int n = frame->dim();
  auto sc = std::make_shared<SpinCoeffs>();
  sc->omega.assign(size_t(n), std::vector<std::vector<Expr>>(
                                  size_t(n), std::vector<Expr>(size_t(n))));
  for (int d = 0; d < n; ++d) {
    std::vector<VectorField> ce;
    for (int i = 0; i < n; ++i)
      ce.push_back(covariant_derivative(g, coordinate_field(g.chart(), d), frame->e[size_t(i)]));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        sc->omega[size_t(d)][size_t(i)][size_t(j)] = inner_sym(g, ce[size_t(i)], frame->e[size_t(j)]);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[frame.get()] = {frame, sc};
  return sc;
}

// (γ_iγ_j)·φ with integer matrix coefficients, symbolic components.
std::vector<Expr> gamma_pair_apply(const ChartPtr& chart, const IMat& gg,
                                   const std::vector<Expr>& comp) {
  int N = int(comp.size());
  std::vector<Expr> out(size_t(N), zero_expr(chart));
  for (int r = 0; r < N; ++r) {
    Expr acc = zero_expr(chart);
    for (int c = 0; c < N; ++c) {
      if (gg(r, c) == 0 || comp[size_t(c)].is_zero()) continue;
      acc = acc + comp[size_t(c)] * Rational(gg(r, c));
    }
    out[size_t(r)] = simplify(acc);
  }
  return out;
}

Chirality flipped(const CliffordRep& rep, Chirality ch) {
  if (!rep.has_half_split() || ch == Chirality::Full) return ch;
  return ch == Chirality::Plus ? Chirality::Minus : Chirality::Plus;
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

Vec SpinorField::evaluate(const Point& p) const {
  Vec out(Eigen::Index(comp.size()));
  for (size_t i = 0; i < comp.size(); ++i)
    out[Eigen::Index(i)] = comp[i].evaluate(p, frame->bindings);
  return out;
}

SpinorField make_spinor_field(MetricPtr g, std::shared_ptr<const CliffordRep> rep,
                              FramePtr frame, std::vector<Expr> comp, Chirality chirality) {
  if (int(comp.size()) != rep->N)
    throw std::invalid_argument("spinor component count does not match the module dimension");
  if (rep->dim() != frame->dim() || rep->dim() != g->dim())
    throw std::invalid_argument("Clifford representation does not match the metric dimension");
  if (chirality != Chirality::Full && !rep->has_half_split())
    throw std::invalid_argument("chirality requested but the module has no half-spinor split");
  return SpinorField{std::move(comp), chirality, std::move(g), std::move(rep), std::move(frame)};
}

SpinorField clifford_action(const VectorField& X, const SpinorField& phi) {
  const ChartPtr& chart = phi.g->chart();
  std::vector<Expr> xf = phi.frame->to_frame(X);
  int N = phi.rep->N;
  std::vector<Expr> out(size_t(N), zero_expr(chart));
  for (int i = 0; i < phi.rep->dim(); ++i) {
    if (xf[size_t(i)].is_zero()) continue;
    const IMat& gm = phi.rep->gamma[size_t(i)];
    for (int r = 0; r < N; ++r) {
      Expr acc = zero_expr(chart);
      for (int c = 0; c < N; ++c) {
        if (gm(r, c) == 0 || phi.comp[size_t(c)].is_zero()) continue;
        acc = acc + phi.comp[size_t(c)] * Rational(gm(r, c));
      }
      if (!acc.is_zero()) out[size_t(r)] = out[size_t(r)] + xf[size_t(i)] * acc;
    }
  }
  for (Expr& e : out) e = simplify(e);
  return SpinorField{std::move(out), flipped(*phi.rep, phi.chirality), phi.g, phi.rep, phi.frame};
}

SpinorField spinor_covariant_derivative(const SpinorField& phi, const VectorField& X) {
  const ChartPtr& chart = phi.g->chart();
  int n = phi.g->dim();
  int N = phi.rep->N;
  auto sc = spin_coeffs(phi.frame);
  std::vector<Expr> out(size_t(N), zero_expr(chart));
  // directional derivative of the components
  for (int c = 0; c < N; ++c) {
    Expr acc = zero_expr(chart);
    for (int d = 0; d < n; ++d) {
      if (X.comp[size_t(d)].is_zero()) continue;
      Expr dphi = differentiate(phi.comp[size_t(c)], d);
      if (!dphi.is_zero()) acc = acc + X.comp[size_t(d)] * dphi;
    }
    out[size_t(c)] = acc;
  }
  // + ½ Σ_{i<j} ε_iε_j ω_ij(X) γ_iγ_j φ
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Expr w = zero_expr(chart);
      for (int d = 0; d < n; ++d) {
        const Expr& wd = sc->omega[size_t(d)][size_t(i)][size_t(j)];
        if (X.comp[size_t(d)].is_zero() || wd.is_zero()) continue;
        w = w + X.comp[size_t(d)] * wd;
      }
      w = simplify(w);
      if (w.is_zero()) continue;
      Rational c(phi.frame->eps[size_t(i)] * phi.frame->eps[size_t(j)], 2);
      IMat gg = phi.rep->gamma[size_t(i)] * phi.rep->gamma[size_t(j)];
      std::vector<Expr> gphi = gamma_pair_apply(chart, gg, phi.comp);
      for (int r = 0; r < N; ++r)
        if (!gphi[size_t(r)].is_zero())
          out[size_t(r)] = out[size_t(r)] + w * gphi[size_t(r)] * c;
    }
  for (Expr& e : out) e = simplify(e);
  return SpinorField{std::move(out), phi.chirality, phi.g, phi.rep, phi.frame};
}

SpinorField dirac(const SpinorField& phi) {
  const ChartPtr& chart = phi.g->chart();
  int n = phi.g->dim();
  int N = phi.rep->N;
  std::vector<Expr> out(size_t(N), zero_expr(chart));
  for (int i = 0; i < n; ++i) {
    SpinorField di = spinor_covariant_derivative(phi, phi.frame->e[size_t(i)]);
    const IMat& gm = phi.rep->gamma[size_t(i)];
    Rational eps(phi.frame->eps[size_t(i)]);
    for (int r = 0; r < N; ++r) {
      Expr acc = zero_expr(chart);
      for (int c = 0; c < N; ++c) {
        if (gm(r, c) == 0 || di.comp[size_t(c)].is_zero()) continue;
        acc = acc + di.comp[size_t(c)] * (eps * Rational(gm(r, c)));
      }
      if (!acc.is_zero()) out[size_t(r)] = out[size_t(r)] + acc;
    }
  }
  for (Expr& e : out) e = simplify(e);
  return SpinorField{std::move(out), flipped(*phi.rep, phi.chirality), phi.g, phi.rep, phi.frame};
}

CheckReport check_twistor(const SpinorField& phi, const CheckOptions& opt) {
  const ChartPtr& chart = phi.g->chart();
  int n = phi.g->dim();
  CheckReport rep;
  rep.check = "twistor";
  rep.tolerance = opt.tolerance;
  SpinorField dphi = dirac(phi);
  Rational inv_n(1, n);
  std::vector<std::vector<Expr>> residual;
  for (int d = 0; d < n; ++d) {
    SpinorField nab = spinor_covariant_derivative(phi, coordinate_field(chart, d));
    SpinorField act = clifford_action(coordinate_field(chart, d), dphi);
    std::vector<Expr> r(size_t(phi.rep->N));
    for (int c = 0; c < phi.rep->N; ++c)
      r[size_t(c)] = simplify(nab.comp[size_t(c)] + act.comp[size_t(c)] * inv_n);
    residual.push_back(std::move(r));
  }
  PointSampler sampler(chart, opt.seed);
  for (int s = 0; s < opt.samples; ++s) {
    Point p = sampler.next();
    if (!phi.g->signature_ok(p)) {
      rep.singular_points.push_back(p);
      continue;
    }
    double worst = 0;
    for (int d = 0; d < n; ++d)
      for (const Expr& e : residual[size_t(d)])
        worst = std::max(worst, std::abs(e.evaluate(p, phi.frame->bindings)));
    rep.record(p, worst);
    ++rep.samples;
  }
  rep.finalize();
  return rep;
}

SpinTractorField twistor_to_tractor(const SpinorField& phi) {
  SpinorField dphi = dirac(phi);
  Rational c(-1, phi.g->dim());
  for (Expr& e : dphi.comp) e = simplify(e * c);
  return SpinTractorField{phi, std::move(dphi)};
}

SpinTractorField spin_tractor_connection_apply(const SpinTractorField& psi,
                                               const VectorField& X) {
  const SpinorField& phi = psi.phi;
  const ChartPtr& chart = phi.g->chart();
  int n = phi.g->dim();
  // K(X)♯: (K(X)♯)^k = g^{kj} K_{ji} X^i
  const CurvatureBundle& cb = phi.g->curvature();
  VectorField ks = zero_field(chart);
  for (int k = 0; k < n; ++k) {
    Expr acc = zero_expr(chart);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (cb.inverse_metric[size_t(k)][size_t(j)].is_zero() ||
            cb.schouten[size_t(j)][size_t(i)].is_zero() || X.comp[size_t(i)].is_zero())
          continue;
        acc = acc + cb.inverse_metric[size_t(k)][size_t(j)] * cb.schouten[size_t(j)][size_t(i)] *
                        X.comp[size_t(i)];
      }
    ks.comp[size_t(k)] = simplify(acc);
  }
  SpinorField top = spinor_covariant_derivative(phi, X);
  SpinorField xp = clifford_action(X, psi.phi_prime);
  for (int c = 0; c < phi.rep->N; ++c)
    top.comp[size_t(c)] = simplify(top.comp[size_t(c)] - xp.comp[size_t(c)]);
  SpinorField bot = clifford_action(ks, phi);
  Rational half(1, 2);
  SpinorField np = spinor_covariant_derivative(psi.phi_prime, X);
  for (int c = 0; c < phi.rep->N; ++c)
    bot.comp[size_t(c)] = simplify(bot.comp[size_t(c)] * half + np.comp[size_t(c)]);
  bot.chirality = psi.phi_prime.chirality;
  return SpinTractorField{std::move(top), std::move(bot)};
}

CheckReport check_spintractor_parallel(const SpinTractorField& psi, const CheckOptions& opt) {
  const SpinorField& phi = psi.phi;
  const ChartPtr& chart = phi.g->chart();
  int n = phi.g->dim();
  CheckReport rep;
  rep.check = "spintractor_parallel";
  rep.tolerance = opt.tolerance;
  std::vector<SpinTractorField> der;
  for (int d = 0; d < n; ++d)
    der.push_back(spin_tractor_connection_apply(psi, coordinate_field(chart, d)));
  PointSampler sampler(chart, opt.seed);
  for (int s = 0; s < opt.samples; ++s) {
    Point p = sampler.next();
    if (!phi.g->signature_ok(p)) {
      rep.singular_points.push_back(p);
      continue;
    }
    double worst = 0;
    for (const SpinTractorField& dd : der) {
      for (const Expr& e : dd.phi.comp)
        worst = std::max(worst, std::abs(e.evaluate(p, phi.frame->bindings)));
      for (const Expr& e : dd.phi_prime.comp)
        worst = std::max(worst, std::abs(e.evaluate(p, phi.frame->bindings)));
    }
    rep.record(p, worst);
    ++rep.samples;
  }
  rep.finalize();
  return rep;
}

DInvariantReport d_invariant(const SpinorField& phi, const CheckOptions& opt) {
  SpinorField dphi = dirac(phi);
  Mat pairing = phi.rep->pairing.cast<double>();
  PointSampler sampler(phi.g->chart(), opt.seed);
  DInvariantReport out;
  bool first = true;
  for (int s = 0; s < opt.samples; ++s) {
    Point p = sampler.next();
    if (!phi.g->signature_ok(p)) continue;
    double v = phi.evaluate(p).dot(pairing * dphi.evaluate(p));
    if (first) {
      out.min_value = out.max_value = v;
      first = false;
    } else {
      out.min_value = std::min(out.min_value, v);
      out.max_value = std::max(out.max_value, v);
    }
  }
  out.constant = (out.max_value - out.min_value) < 1e-6;
  out.identically_zero =
      std::max(std::abs(out.min_value), std::abs(out.max_value)) < 1e-7;
  return out;
}

SpinorField conformal_rescale_spinor(const SpinorField& phi, const Expr& sigma) {
  const ChartPtr& chart = phi.g->chart();
  auto gt = std::make_shared<ChartMetric>(conformal_rescale(*phi.g, sigma));
  Expr em = make_exp(simplify(-sigma));
  Expr ep = make_exp(sigma);
  auto nf = std::make_shared<Frame>();
  nf->g = gt;
  nf->eps = phi.frame->eps;
  nf->bindings = phi.frame->bindings;
  int n = phi.g->dim();
  nf->e.reserve(size_t(n));
  for (const VectorField& e : phi.frame->e) {
    VectorField se = zero_field(chart);
    for (int d = 0; d < n; ++d) se.comp[size_t(d)] = simplify(em * e.comp[size_t(d)]);
    nf->e.push_back(std::move(se));
  }
  nf->dual.assign(size_t(n), std::vector<Expr>(size_t(n)));
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < n; ++d)
      nf->dual[size_t(i)][size_t(d)] = simplify(ep * phi.frame->dual[size_t(i)][size_t(d)]);
  Expr half_exp = make_exp(simplify(sigma * Rational(1, 2)));
  std::vector<Expr> comp(phi.comp.size());
  for (size_t c = 0; c < phi.comp.size(); ++c) comp[c] = simplify(half_exp * phi.comp[c]);
  return SpinorField{std::move(comp), phi.chirality, gt, phi.rep, nf};
}

Mat TractorSpinorModel::embed_matrix(double alpha, const Vec& y_frame, double beta) const {
  Mat out = alpha * gamma_eminus + beta * gamma_eplus;
  for (int i = 0; i < int(gamma_mid.size()); ++i) out += y_frame[i] * gamma_mid[size_t(i)];
  return out;
}

Vec TractorSpinorModel::embed_spintractor(const Vec& phi, const Vec& phi_prime) const {
  return iota_plus * phi + iota_minus * phi_prime;
}

std::shared_ptr<const TractorSpinorModel> build_tractor_spinor_model(int p, int q) {
  auto model = std::make_shared<TractorSpinorModel>();
  model->small = std::make_shared<CliffordRep>(build_clifford(p, q));
  model->big = std::make_shared<CliffordRep>(build_clifford(p + 1, q + 1));
  const CliffordRep& sm = *model->small;
  const CliffordRep& bg = *model->big;
  int Ns = sm.N, Nb = bg.N, n = p + q;
  const IMat& f_plus = bg.gamma[0];               // first ε = +1 direction
  const IMat& f_minus = bg.gamma[size_t(q + 1)];  // first ε = −1 direction
  model->gamma_eplus = (f_plus + f_minus).cast<double>() / 2.0;
  model->gamma_eminus = (f_plus - f_minus).cast<double>();
  std::vector<IMat> mid;
  for (int i = 1; i <= q; ++i) mid.push_back(bg.gamma[size_t(i)]);
  for (int i = q + 2; i < bg.dim(); ++i) mid.push_back(bg.gamma[size_t(i)]);
  for (const IMat& m : mid) model->gamma_mid.push_back(m.cast<double>());

  // ι₊ : Δ_{p,q} → Ann(e₊) ⊂ Δ_{p+1,q+1} from
  //   (f₊ + f₋)·ι₊ = 0  and  γ_mid,i·ι₊ = s₊·ι₊·γ_i
  // as a rational nullspace over the vectorized unknown (row r, col c).
  IMat ann = f_plus + f_minus;
  auto solve = [&](int s) {
    std::vector<std::vector<Rational>> rows;
    auto var = [&](int r, int c) { return r * Ns + c; };
    for (int r = 0; r < Nb; ++r)
      for (int c = 0; c < Ns; ++c) {
        std::vector<Rational> row(size_t(Nb * Ns), Rational(0));
        bool any = false;
        for (int k = 0; k < Nb; ++k)
          if (ann(r, k) != 0) {
            row[size_t(var(k, c))] = Rational(ann(r, k));
            any = true;
          }
        if (any) rows.push_back(std::move(row));
      }
    for (int i = 0; i < n; ++i) {
      const IMat& Mi = mid[size_t(i)];
      const IMat& Gi = sm.gamma[size_t(i)];
      for (int r = 0; r < Nb; ++r)
        for (int c = 0; c < Ns; ++c) {
          std::vector<Rational> row(size_t(Nb * Ns), Rational(0));
          for (int k = 0; k < Nb; ++k)
            if (Mi(r, k) != 0) row[size_t(var(k, c))] = row[size_t(var(k, c))] + Rational(Mi(r, k));
          for (int k = 0; k < Ns; ++k)
            if (Gi(k, c) != 0)
              row[size_t(var(r, k))] = row[size_t(var(r, k))] - Rational(s * Gi(k, c));
          bool any = false;
          for (const Rational& x : row) any = any || !x.is_zero();
          if (any) rows.push_back(std::move(row));
        }
    }
    return rational_nullspace(rows);
  };
  std::vector<std::vector<Rational>> sol;
  for (int s : {1, -1}) {
    sol = solve(s);
    if (!sol.empty()) {
      model->s_plus = s;
      break;
    }
  }
  if (sol.empty()) throw std::logic_error("no tractor spinor intertwiner found");
  Mat iota(Nb, Ns);
  double top = 0;
  for (int r = 0; r < Nb; ++r)
    for (int c = 0; c < Ns; ++c) {
      iota(r, c) = sol[0][size_t(r * Ns + c)].to_double();
      top = std::max(top, std::abs(iota(r, c)));
    }
  model->iota_plus = iota / top;
  model->iota_minus = -double(model->s_plus) * model->gamma_eminus * model->iota_plus;
  return model;
}

namespace {

// Columns of the tractor Clifford action on an embedded spin tractor, in the
// gauge splitting order (e₋, middle frame, e₊).
Mat tractor_action_columns(const TractorSpinorModel& model, const Vec& psi) {
  int n = int(model.gamma_mid.size());
  Mat m(psi.size(), n + 2);
  m.col(0) = model.gamma_eminus * psi;
  for (int i = 0; i < n; ++i) m.col(1 + i) = model.gamma_mid[size_t(i)] * psi;
  m.col(n + 1) = model.gamma_eplus * psi;
  return m;
}

}  // namespace

KernelDistributionReport kernel_distribution(const SpinTractorField& psi,
                                             const TractorSpinorModel& model,
                                             const CheckOptions& opt) {
  const SpinorField& phi = psi.phi;
  const ChartPtr& chart = phi.g->chart();
  int n = phi.g->dim();
  KernelDistributionReport out;
  out.residuals.check = "kernel_distribution";
  out.residuals.tolerance = opt.tolerance;
  PointSampler sampler(chart, opt.seed);
  std::vector<Point> pts;
  std::vector<Mat> actions;
  for (int s = 0; s < opt.samples; ++s) {
    Point p = sampler.next();
    if (!phi.g->signature_ok(p)) {
      out.residuals.singular_points.push_back(p);
      continue;
    }
    Vec v = model.embed_spintractor(phi.evaluate(p), psi.phi_prime.evaluate(p));
    if (v.norm() < 1e-12) {
      out.residuals.singular_points.push_back(p);
      continue;
    }
    Mat m = tractor_action_columns(model, v / v.norm());
    out.ranks.push_back(n + 2 - numeric_rank(m));
    pts.push_back(p);
    actions.push_back(std::move(m));
  }
  if (pts.empty()) throw std::runtime_error("no usable sample points for the kernel fit");
  out.constant_rank = true;
  for (int r : out.ranks) out.constant_rank = out.constant_rank && (r == out.ranks.front());
  Mat stacked(Eigen::Index(actions.size()) * actions.front().rows(), n + 2);
  for (size_t i = 0; i < actions.size(); ++i)
    stacked.middleRows(Eigen::Index(i) * actions.front().rows(), actions.front().rows()) =
        actions[i];
  Mat cons = rref_span(nullspace(stacked));
  for (size_t i = 0; i < actions.size(); ++i) {
    double r = cons.cols() > 0 ? (actions[i] * cons).cwiseAbs().maxCoeff() : 0.0;
    out.residuals.record(pts[i], r);
    ++out.residuals.samples;
  }
  out.residuals.finalize();
  // smooth generators with constant frame components, exactified
  auto gauge = std::make_shared<ChartMetric>(*phi.g);
  gauge->merge_bindings(phi.frame->bindings);
  for (Eigen::Index c = 0; c < cons.cols(); ++c) {
    std::vector<Expr> yf{size_t(n), Expr()};
    for (int i = 0; i < n; ++i)
      yf[size_t(i)] = Expr::constant(chart, approx_rational(cons(1 + i, c)));
    Tractor t;
    t.alpha = Expr::constant(chart, approx_rational(cons(0, c)));
    t.Y = phi.frame->from_frame(yf);
    t.beta = Expr::constant(chart, approx_rational(cons(n + 1, c)));
    t.gauge = gauge;
    out.H.generators.push_back(std::move(t));
  }
  return out;
}

Mat spinor_kernel_at(const SpinorField& phi, const Point& p) {
  Vec v = phi.evaluate(p);
  if (v.norm() < 1e-12) throw std::invalid_argument("kernel of the zero spinor is undefined");
  int n = phi.g->dim();
  Mat m(phi.rep->N, n);
  for (int i = 0; i < n; ++i) m.col(i) = phi.rep->gamma[size_t(i)].cast<double>() * v;
  return phi.frame->frame_matrix(p) * nullspace(m);
}

Distribution spinor_kernel_distribution(const SpinorField& phi, const CheckOptions& opt) {
  const ChartPtr& chart = phi.g->chart();
  int n = phi.g->dim();
  PointSampler sampler(chart, opt.seed);
  std::vector<Mat> actions;
  std::vector<int> dims;
  for (int s = 0; s < opt.samples; ++s) {
    Point p = sampler.next();
    if (!phi.g->signature_ok(p)) continue;
    Vec v = phi.evaluate(p);
    if (v.norm() < 1e-12) continue;
    Mat m(phi.rep->N, n);
    for (int i = 0; i < n; ++i) m.col(i) = phi.rep->gamma[size_t(i)].cast<double>() * (v / v.norm());
    dims.push_back(n - numeric_rank(m));
    actions.push_back(std::move(m));
  }
  if (actions.empty()) throw std::runtime_error("no usable sample points for the kernel fit");
  Mat stacked(Eigen::Index(actions.size()) * phi.rep->N, n);
  for (size_t i = 0; i < actions.size(); ++i)
    stacked.middleRows(Eigen::Index(i) * phi.rep->N, phi.rep->N) = actions[i];
  Mat cons = rref_span(nullspace(stacked));
  for (int d : dims)
    if (d != int(cons.cols()))
      throw std::runtime_error(
          "pointwise spinor kernels do not admit a constant-coefficient fit");
  Distribution out;
  for (Eigen::Index c = 0; c < cons.cols(); ++c) {
    std::vector<Expr> yf{size_t(n), Expr()};
    for (int i = 0; i < n; ++i) yf[size_t(i)] = Expr::constant(chart, approx_rational(cons(i, c)));
    out.generators.push_back(phi.frame->from_frame(yf));
  }
  return out;
}

}  // namespace tractorlab
