#pragma once

#include "tractorlab/clifford.hpp"
#include "tractorlab/geometry.hpp"
#include "tractorlab/tractor.hpp"

namespace tractorlab {

/// Pseudo-orthonormal frame over a chart: g(e_i,e_j) = ε_iδ_ij with the
/// ε = +1 block first (matching CliffordRep direction order). `dual` holds
/// the change of basis ∂_d = Σ_i dual[i][d]·e_i. `bindings` extends the
/// metric bindings with any normalization callbacks generated during the
/// build (non-constant norms enter as opaque f^{−1/2} factors).
struct Frame {
  std::vector<VectorField> e;
  std::vector<int> eps;
  std::vector<std::vector<Expr>> dual;
  Bindings bindings;
  MetricPtr g;

  int dim() const { return int(e.size()); }
  /// Frame components of a coordinate-component vector field.
  std::vector<Expr> to_frame(const VectorField& X) const;
  /// Coordinate components of frame-component coefficients.
  VectorField from_frame(const std::vector<Expr>& c) const;
  Mat frame_matrix(const Point& p) const;  // columns are the e_i
};

using FramePtr = std::shared_ptr<const Frame>;

/// Pseudo-Gram-Schmidt on the coordinate frame. Exact where possible
/// (hyperbolic pairs for null directions, rational 1/√c for constant norms),
/// opaque-callback normalization for non-constant norms of constant sign.
/// Throws FrameError when a pivot degenerates.
class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FramePtr build_frame(const MetricPtr& g, const Point& base);

/// Spinor field: N Expr components w.r.t. `frame`, in the module of `rep`.
struct SpinorField {
  std::vector<Expr> comp;
  Chirality chirality = Chirality::Full;
  MetricPtr g;
  std::shared_ptr<const CliffordRep> rep;
  FramePtr frame;

  Vec evaluate(const Point& p) const;
};

SpinorField make_spinor_field(MetricPtr g, std::shared_ptr<const CliffordRep> rep,
                              FramePtr frame, std::vector<Expr> comp,
                              Chirality chirality = Chirality::Full);

/// Clifford action of a coordinate-component vector field on a spinor field
/// (the vector is rewritten in frame components first).
SpinorField clifford_action(const VectorField& X, const SpinorField& phi);

/// ∇^{S^g}_X φ = X(φ) + ½ Σ_{i<j} ε_iε_j g(∇_X e_i, e_j) γ_iγ_j φ.
SpinorField spinor_covariant_derivative(const SpinorField& phi, const VectorField& X);

/// D^g φ = Σ_i ε_i γ_i ∇_{e_i} φ.
SpinorField dirac(const SpinorField& phi);

/// Residual of ∇_X φ + (1/n)·X·D^gφ over sampled points and coordinate
/// directions.
CheckReport check_twistor(const SpinorField& phi, const CheckOptions& opt = {});

/// Spin tractor in the gauge-g splitting: the pair (φ, φ′).
struct SpinTractorField {
  SpinorField phi;
  SpinorField phi_prime;
};

/// φ ↦ (φ, −(1/n)·D^gφ).
SpinTractorField twistor_to_tractor(const SpinorField& phi);

/// ∇^nc in the 2×2 gauge form:
/// (∇_X φ − X·φ′, ½K^g(X)·φ + ∇_X φ′).
SpinTractorField spin_tractor_connection_apply(const SpinTractorField& psi,
                                               const VectorField& X);

/// Residual of ∇^nc_{∂_d} ψ = 0 over samples and coordinate directions.
CheckReport check_spintractor_parallel(const SpinTractorField& psi,
                                       const CheckOptions& opt = {});

/// ⟨φ, D^gφ⟩ sampled over the chart.
struct DInvariantReport {
  double min_value = 0;
  double max_value = 0;
  bool constant = false;     // within 1e-6
  bool identically_zero = false;  // within 1e-7
};

DInvariantReport d_invariant(const SpinorField& phi, const CheckOptions& opt = {});

/// φ ↦ e^{σ/2}φ read in the rescaled frame ẽ_i = e^{−σ}e_i of g̃ = e^{2σ}g.
SpinorField conformal_rescale_spinor(const SpinorField& phi, const Expr& sigma);

/// Spinor module of the tractor bundle: Δ_{p+1,q+1} with the gauge splitting
/// ℝ^{p+1,q+1} = ℝe_− ⊕ ℝ^{p,q} ⊕ ℝe_+ (e_± null, ⟨e_−,e_+⟩ = 1) and the
/// intertwiners ι_± : Δ_{p,q} → Ann(e_±).
struct TractorSpinorModel {
  std::shared_ptr<const CliffordRep> small;  // (p,q)
  std::shared_ptr<const CliffordRep> big;    // (p+1,q+1)
  Mat gamma_eplus, gamma_eminus;
  std::vector<Mat> gamma_mid;  // Clifford action of the middle frame
  Mat iota_plus, iota_minus;   // N_big × N_small
  int s_plus = 1;              // twist sign: γ(x)ι₊ = s₊·ι₊γ(x) on the middle

  /// Clifford element of (α, Y_frame, β) under α·e_− + Y + β·e_+.
  Mat embed_matrix(double alpha, const Vec& y_frame, double beta) const;
  /// ψ = (φ, φ′) ↦ ι₊φ + ι₋φ′ ∈ Δ_{p+1,q+1}.
  Vec embed_spintractor(const Vec& phi, const Vec& phi_prime) const;
};

std::shared_ptr<const TractorSpinorModel> build_tractor_spinor_model(int p, int q);

/// ker ψ ⊂ T(M): pointwise nullspace of tractor Clifford multiplication on
/// the embedded ψ. Generators are fitted with constant frame components
/// (validated at every sample); pointwise ranks are reported.
struct KernelDistributionReport {
  TractorDistribution H;
  std::vector<int> ranks;        // per sample point
  CheckReport residuals;         // fitted-generator membership residuals
  bool constant_rank = false;
};

KernelDistributionReport kernel_distribution(const SpinTractorField& psi,
                                             const TractorSpinorModel& model,
                                             const CheckOptions& opt = {});

/// ker φ ⊂ TM = {X : X·φ = 0}, fitted with constant frame components over
/// the sample set (throws if the pointwise kernels do not admit such a fit).
Distribution spinor_kernel_distribution(const SpinorField& phi, const CheckOptions& opt = {});

/// Pointwise ker φ in coordinate components (columns).
Mat spinor_kernel_at(const SpinorField& phi, const Point& p);

}  // namespace tractorlab
