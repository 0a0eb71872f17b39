#pragma once

#include <string>
#include <utility>

#include "tractorlab/geometry.hpp"

namespace tractorlab {

/// Standard tractor field in the splitting of a fixed metric gauge: (α, Y, β).
/// Numeric tractors are columns (α, Y¹…Yⁿ, β) of length n+2 in the same gauge.
struct Tractor {
  Expr alpha;
  VectorField Y;
  Expr beta;
  MetricPtr gauge;
};

Tractor make_tractor(MetricPtr g, Expr alpha, VectorField Y, Expr beta);
/// Numeric value of the tractor at a point, as an (n+2)-column.
Vec tractor_eval(const Tractor& t, const Point& p);

/// ⟨u,v⟩ = α₁β₂ + α₂β₁ + g(Y₁,Y₂), symbolic. Throws on gauge mismatch.
Expr tractor_inner(const Tractor& u, const Tractor& v);

/// ∇^nc_X t = (X(α) + K(X,Y), ∇_X Y + αX − βK(X)♯, X(β) − g(X,Y)) in the
/// gauge of t.
Tractor tractor_connection_apply(const VectorField& X, const Tractor& t);

/// Gauge change Φ^{g̃} ∘ (Φ^g)^{-1} to g̃ = e^{2σ}g:
/// (α,Y,β) ↦ (e^{−σ}(α − Y(σ) − ½β‖grad σ‖²), e^{−σ}(Y + β grad σ), e^{σ}β).
/// The rescaled gauge metric is computed internally unless supplied.
Tractor gauge_transform(const Tractor& t, const Expr& sigma);
Tractor gauge_transform(const Tractor& t, const Expr& sigma, MetricPtr rescaled);

/// Pointwise matrix of the gauge change acting on numeric columns.
Mat gauge_matrix(const ChartMetric& g, const Expr& sigma, const Point& p);

/// Connection coefficient matrix C_d at a point: ∇_{∂_d} t = ∂_d t + C_d·t
/// on numeric columns.
Mat tractor_connection_matrix(const ChartMetric& g, int d, const Point& p);

/// Gram matrix of the tractor metric in the splitting at a point.
Mat tractor_gram(const ChartMetric& g, const Point& p);

/// RK4 transport of a numeric tractor along the curve (∇^nc_{γ′} t = 0).
Vec tractor_parallel_transport(const ChartMetric& g, const Curve& curve, const Vec& t0,
                               const TransportOptions& opt = {});

struct LoopTranscript {
  std::string loop_id;
  Mat matrix;            // frame transport in the gauge-g splitting
  double gram_residual;  // ‖MᵀGM − G‖∞ at the base point
};

struct HolonomySample {
  Point base;
  std::vector<LoopTranscript> loops;
};

/// Coordinate-plane rectangle loops of side eps at base, all pairs (i < j).
std::vector<std::pair<std::string, Curve>> default_loops(const ChartPtr& chart,
                                                         const Point& base,
                                                         double eps = 0.1);

/// Transports the full (n+2)-frame around each loop; loops run concurrently.
HolonomySample holonomy_sample(const ChartMetric& g, const Point& base,
                               const std::vector<std::pair<std::string, Curve>>& loops,
                               const TransportOptions& opt = {});

/// Totally lightlike tractor distribution; all generators share one gauge.
struct TractorDistribution {
  std::vector<Tractor> generators;
  int rank() const { return int(generators.size()); }
};

/// ∇^nc_{∂_d} h ∈ span(H) for all generators and coordinate directions, plus
/// a re-check of total lightlikeness, at sampled points. Pass
/// require_lightlike = false to verify invariance alone (e.g. for H^⊥).
CheckReport verify_invariant_lightlike(const MetricPtr& g, const TractorDistribution& H,
                                       const CheckOptions& opt = {},
                                       bool require_lightlike = true);

/// H = (0, L, 0) ⊕ span(0,0,1). Throws if L is not totally lightlike.
TractorDistribution build_H_from_L(const MetricPtr& g, const Distribution& L);

struct ProjectedDistribution {
  Distribution L;
  std::vector<Point> singular_points;
};

/// L = pr_TM(H ∩ I_−^⊥): pointwise nullspace of the β functional on span(H),
/// smooth generators fitted as constant-coefficient combinations over the
/// sample set. Points where the intersection rank deviates from k−1 are
/// reported as singular.
ProjectedDistribution project_L_from_H(const MetricPtr& g, const TractorDistribution& H,
                                       const CheckOptions& opt = {});

}  // namespace tractorlab
