#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "tractorlab/expr.hpp"
#include "tractorlab/linalg.hpp"
#include "tractorlab/report.hpp"

namespace tractorlab {

/// Vector field in the coordinate frame; one Expr component per coordinate.
struct VectorField {
  std::vector<Expr> comp;
  int dim() const { return int(comp.size()); }
  Vec evaluate(const Point& p, const Bindings& b = {}) const;
};

struct OneForm {
  std::vector<Expr> comp;
  int dim() const { return int(comp.size()); }
  Vec evaluate(const Point& p, const Bindings& b = {}) const;
};

/// Totally arbitrary k-generator distribution in TM.
struct Distribution {
  std::vector<VectorField> generators;
  int rank() const { return int(generators.size()); }
};

/// Christoffel symbols and the curvature tensors of a metric, all symbolic.
/// Index conventions: christoffel[k][i][j] = Γ^k_ij, riemann[l][i][j][k] =
/// R^l_ijk (= dΓ terms of ∇_j∇_k - ∇_k∇_j acting on dx^l slot), ricci[i][j],
/// schouten[i][j].
struct CurvatureBundle {
  std::vector<std::vector<std::vector<Expr>>> christoffel;
  std::vector<std::vector<std::vector<std::vector<Expr>>>> riemann;
  std::vector<std::vector<Expr>> ricci;
  Expr scal;
  std::vector<std::vector<Expr>> schouten;
  std::vector<std::vector<Expr>> inverse_metric;
  Expr det;
};

/// Pseudo-Riemannian metric on a chart: symmetric Expr matrix plus the
/// intended signature (p = negative directions, q = positive directions).
class ChartMetric {
 public:
  ChartMetric(ChartPtr chart, std::vector<std::vector<Expr>> components, int p, int q,
              Bindings bindings = {});

  const ChartPtr& chart() const { return chart_; }
  int dim() const { return chart_->dim(); }
  int p() const { return p_; }
  int q() const { return q_; }
  const Expr& component(int i, int j) const { return comp_[size_t(i)][size_t(j)]; }
  const std::vector<std::vector<Expr>>& components() const { return comp_; }
  const Bindings& bindings() const { return bindings_; }
  void merge_bindings(const Bindings& extra) { bindings_.merge(extra); }

  Mat evaluate(const Point& pt) const;
  /// Signature check by inertia at a point.
  bool signature_ok(const Point& pt, double tol = 1e-9) const;

  /// Lazily computed curvature package (cached).
  const CurvatureBundle& curvature() const;

  double inner(const VectorField& X, const VectorField& Y, const Point& pt) const;

 private:
  ChartPtr chart_;
  std::vector<std::vector<Expr>> comp_;
  int p_, q_;
  Bindings bindings_;
  mutable std::shared_ptr<const CurvatureBundle> curv_;
};

using MetricPtr = std::shared_ptr<const ChartMetric>;

/// Symbolic determinant by cofactor expansion (zero-aware).
Expr symbolic_det(const ChartPtr& chart, const std::vector<std::vector<Expr>>& m);

/// Full curvature computation (Christoffel, Riemann, Ricci, scal, Schouten).
/// Throws std::domain_error when the determinant is structurally zero.
CurvatureBundle compute_curvature(const ChartMetric& g);

/// ∇_X Y in coordinate components.
VectorField covariant_derivative(const ChartMetric& g, const VectorField& X,
                                 const VectorField& Y);

/// Lie bracket [X, Y].
VectorField lie_bracket(const ChartPtr& chart, const VectorField& X, const VectorField& Y);

/// e^{2σ} g on the same chart.
ChartMetric conformal_rescale(const ChartMetric& g, const Expr& sigma);

/// ∇̃_X A for g̃ = e^{2σ}g by the conformal transformation formula for the
/// Levi-Civita connection (independent route used by tests):
/// ∇̃_X A = ∇_X A + dσ(X)A + dσ(A)X − g(A,X)·grad σ.
VectorField rescaled_covariant_derivative(const ChartMetric& g, const Expr& sigma,
                                          const VectorField& X, const VectorField& A);

/// grad^g σ = (g^{ij} ∂_j σ) ∂_i.
VectorField gradient(const ChartMetric& g, const Expr& sigma);

/// Parametrized path t ∈ [0,1] with numeric position/velocity callbacks.
/// `breaks` lists interior parameter values where the velocity may jump;
/// integrators split there and never evaluate the velocity across a break.
struct Curve {
  std::function<Point(double)> position;
  std::function<Vec(double)> velocity;
  std::vector<double> breaks;
};

/// Piecewise-linear curve through the given vertices (uniform parameter).
Curve polyline(const std::vector<Point>& vertices);

/// Axis-aligned rectangle loop at `base` in the (i, j) coordinate plane with
/// side `eps`, returned to base.
Curve rectangle_loop(const Point& base, int i, int j, double eps);

struct TransportOptions {
  double step = 1e-3;
  bool check_signature = true;
};

/// Parallel transport of a tangent vector along the curve by fixed-step RK4.
Vec parallel_transport_vector(const ChartMetric& g, const Curve& curve, const Vec& v0,
                              const TransportOptions& opt = {});

/// Fixed-step RK4 for a linear ODE v′ = A(γ(t), γ′(t))·v along the curve,
/// splitting the integration at the curve's velocity breaks. The signature
/// check of `opt` applies at every step start.
Vec rk4_linear_transport(const ChartMetric& g, const Curve& curve, const Vec& v0,
                         const std::function<Mat(const Point&, const Vec&)>& rhs_matrix,
                         const TransportOptions& opt = {});

struct CheckOptions {
  int samples = 64;
  double tolerance = 1e-7;
  std::uint64_t seed = 42;
};

/// ∇_X K_i ∈ span(L) for random points and coordinate directions X.
CheckReport check_distribution_parallel(const ChartMetric& g, const Distribution& L,
                                        const CheckOptions& opt = {});

/// Ric(e_i)♯ ∈ span(L) at random points.
CheckReport check_ricci_image(const ChartMetric& g, const Distribution& L,
                              const CheckOptions& opt = {});

/// Same membership test with the Schouten tensor in place of Ricci.
CheckReport check_schouten_image(const ChartMetric& g, const Distribution& L,
                                 const CheckOptions& opt = {});

/// [K_i, K_j] ∈ span(L) at random points.
CheckReport check_integrable(const ChartMetric& g, const Distribution& L,
                             const CheckOptions& opt = {});

/// Potential of a closed 1-form: numeric callback σ with σ(base) = 0 and
/// dσ = θ, by line integration along axis-parallel polylines from base.
/// Closedness of θ is verified at sample points first.
std::function<double(const Point&)> poincare_potential(const ChartPtr& chart,
                                                       const OneForm& theta,
                                                       const Point& base,
                                                       const Bindings& bindings = {},
                                                       double closed_tol = 1e-8,
                                                       std::uint64_t seed = 42);

/// Coordinate basis field ∂_i.
VectorField coordinate_field(const ChartPtr& chart, int i);
VectorField zero_field(const ChartPtr& chart);
Expr zero_expr(const ChartPtr& chart);
Expr one_expr(const ChartPtr& chart);

/// Constant diagonal metric with the given ±1 entries.
ChartMetric diagonal_metric(ChartPtr chart, const std::vector<int>& signs);

}  // namespace tractorlab
