#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "tractorlab/expr.hpp"
#include "tractorlab/rational.hpp"

namespace tractorlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// (negative, positive) eigenvalue counts; zero eigenvalues (|λ| < tol·max)
/// are counted separately in `null_count`.
struct Inertia {
  int neg = 0;
  int pos = 0;
  int null_count = 0;
};

Inertia inertia_of(const Mat& symmetric, double tol = 1e-9);

/// Residual of least-squares projection of v onto the column span of B,
/// relative to |v| (0 when v = 0). SVD cutoff 1e-9 · σ_max.
double span_residual(const Mat& basis, const Vec& v);

/// Numeric rank via SVD with cutoff 1e-9 · σ_max (absolute cutoff 1e-12 when
/// the matrix is zero).
int numeric_rank(const Mat& m, double rel_cutoff = 1e-9);

/// Orthonormal basis of the nullspace of m (columns), SVD cutoff as above.
Mat nullspace(const Mat& m, double rel_cutoff = 1e-9);

/// Orthonormal basis of the column span, SVD cutoff as above.
Mat column_span(const Mat& m, double rel_cutoff = 1e-9);

/// Largest principal angle gap between two spans, as a residual in [0,1]:
/// 0 when span(A) == span(B). Symmetric.
double span_distance(const Mat& a, const Mat& b);

/// Canonical basis of the column span: reduced row echelon form over the
/// transposed basis, pivots normalized to 1. Useful before rationalizing
/// fitted coefficients, which are expected to be small rationals.
Mat rref_span(const Mat& basis, double tol = 1e-9);

/// Exact nullspace basis over the rationals (columns), via fraction-free
/// Gaussian elimination.
std::vector<std::vector<Rational>> rational_nullspace(
    const std::vector<std::vector<Rational>>& m);

/// Deterministic point sampler on a chart box.
class PointSampler {
 public:
  PointSampler(ChartPtr chart, std::uint64_t seed, double margin = 0.05);
  Point next();
  double uniform(double lo, double hi);
  std::mt19937_64& rng() { return rng_; }

 private:
  ChartPtr chart_;
  std::mt19937_64 rng_;
  double margin_;
};

}  // namespace tractorlab
