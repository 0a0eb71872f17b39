#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tractorlab/linalg.hpp"
#include "tractorlab/rational.hpp"

namespace tractorlab {

using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

enum class Chirality { Full, Plus, Minus };

/// Real spinor-module element; `exact` mirrors `comp` when the spinor was
/// constructed from rationals (kernel ranks are then computed exactly).
struct Spinor {
  Vec comp;
  Chirality chirality = Chirality::Full;
  std::vector<Rational> exact;  // empty when only floating data is available
  bool is_exact() const { return !exact.empty(); }
};

Spinor make_spinor(Vec comp, Chirality chirality = Chirality::Full);
Spinor make_spinor_exact(std::vector<Rational> comp, Chirality chirality = Chirality::Full);

/// Real Clifford algebra representation for signature (p,q) = (#negative,
/// #positive), convention x·x = −‖x‖² so γ_i² = −ε_i·Id. Directions are
/// ordered ε = +1 block first, then ε = −1 block.
struct CliffordRep {
  int p = 0, q = 0;
  int N = 0;
  std::vector<IMat> gamma;
  std::vector<int> eps;
  IMat omega;        // volume element (p+q even); empty otherwise
  IMat proj_plus;    // (Id + ω)/2 on the split case p == q; empty otherwise
  IMat proj_minus;   // (Id − ω)/2
  IMat pairing;      // Gram matrix of ⟨·,·⟩
  bool pairing_symmetric = true;  // false: symplectic

  int dim() const { return p + q; }
  bool has_half_split() const { return proj_plus.size() > 0; }
};

/// Supported signatures: (p,q) with p ∈ {q, q+1} and min ≤ 4, plus all their
/// lower-dimensional companions reachable by the same recursion.
CliffordRep build_clifford(int p, int q);

/// (Σ x_i γ_i)·v. Chirality of the result follows the projector algebra in
/// the split case (odd elements flip it).
Spinor clifford_mul(const CliffordRep& rep, const Vec& x, const Spinor& v);
std::vector<Rational> clifford_mul_exact(const CliffordRep& rep,
                                         const std::vector<Rational>& x,
                                         const std::vector<Rational>& v);

/// Basis (columns) of ker v = {x : x·v = 0} ⊂ ℝ^{p,q}; exact over rationals
/// when the spinor is exact, SVD with cutoff 1e-10 otherwise. Throws on v=0.
Mat spinor_kernel(const CliffordRep& rep, const Spinor& v);
std::vector<std::vector<Rational>> spinor_kernel_exact(const CliffordRep& rep,
                                                       const std::vector<Rational>& v);

int spinor_kernel_dim(const CliffordRep& rep, const Spinor& v);

/// dim ker v == m = min(p,q).
bool is_pure(const CliffordRep& rep, const Spinor& v);

/// vᵀ · Gram · w.
double spinor_pairing(const CliffordRep& rep, const Spinor& v, const Spinor& w);
Rational spinor_pairing_exact(const CliffordRep& rep, const std::vector<Rational>& v,
                              const std::vector<Rational>& w);

/// Gamma matrices (and ε list) as a JSON document, for external cross-checks.
std::string clifford_to_json(const CliffordRep& rep);

}  // namespace tractorlab
