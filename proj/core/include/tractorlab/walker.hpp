#pragma once

#include "tractorlab/spintractor.hpp"

namespace tractorlab {

/// Walker block data: g = [[0,0,I_r],[0,A,H],[I_r,Hᵀ,B]] in coordinates
/// (x_1..x_r, mid, x_{n−r+1}..x_n). A ((n−2r)²) and H ((n−2r)×r) must not
/// depend on x_1..x_r (checked structurally, including opaque argument
/// lists); A and B must be symmetric.
struct WalkerSpec {
  int n = 0, r = 0;
  ChartPtr chart;
  std::vector<std::vector<Expr>> A, H, B;
  Bindings bindings;
};

struct WalkerBuild {
  MetricPtr g;
  Distribution L;  // span(∂x_1,…,∂x_r)
};

WalkerBuild build_walker(const WalkerSpec& spec);

/// Pure-spinor normal form h = −dz² − 4Σ dx_i dy^i − 4Σ g_ij dy^i dy^j on
/// (x_1..x_m, y^1..y^m, z), signature (m+1,m); with `omit_z` the −dz² term
/// and the z coordinate are dropped and the signature is (m,m).
/// Constraints: g_ij = g_ji and Σ_i ∂g_ik/∂x_i = 0 for every k.
struct PureWalkerSpec {
  int m = 0;
  bool omit_z = false;
  ChartPtr chart;
  std::vector<std::vector<Expr>> gij;
  Bindings bindings;
};

/// Metric plus a certified parallel pure spinor in the engine's frame gauge.
/// The spinor is found by a constant-component ansatz over the frame and
/// certified by its covariant-derivative residual; if no constant
/// representative exists the build throws (surfaced, not silently accepted).
struct PureWalkerBuild {
  MetricPtr g;
  FramePtr frame;
  std::shared_ptr<const CliffordRep> rep;
  SpinorField phi;
  Distribution L;             // ker φ, constant-coefficient fit
  CheckReport certification;  // ∇φ residuals at the sample points
};

PureWalkerBuild build_pure_walker(const PureWalkerSpec& spec, const CheckOptions& opt = {});

/// Parallel + Ricci-image + scal ≈ 0 bundle ("Ricci-isotropic" verdict).
struct RicciIsotropicReport {
  CheckReport parallel;
  CheckReport ricci_image;
  double max_scal = 0;
  bool scal_zero = false;
  bool pass = false;
};

RicciIsotropicReport validate_ricci_isotropic(const MetricPtr& g, const Distribution& L,
                                              const CheckOptions& opt = {});

/// Midpoint of the chart sampling box (default frame base point).
Point chart_center(const ChartPtr& chart);

}  // namespace tractorlab
