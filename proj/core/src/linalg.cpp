#include "tractorlab/linalg.hpp"

namespace tractorlab {

Inertia inertia_of(const Mat& symmetric, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetric);
  const Vec& ev = es.eigenvalues();
  double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Inertia r;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) < tol * scale)
      ++r.null_count;
    else if (ev[i] < 0)
      ++r.neg;
    else
      ++r.pos;
  }
  return r;
}

double span_residual(const Mat& basis, const Vec& v) {
  double nv = v.norm();
  if (nv == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-9);
  Vec c = svd.solve(v);
  return (basis * c - v).norm() / nv;
}

int numeric_rank(const Mat& m, double rel_cutoff) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Mat> svd(m);
  const Vec& s = svd.singularValues();
  if (s.size() == 0) return 0;
  double cut = std::max(rel_cutoff * s[0], 1e-12);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > cut) ++r;
  return r;
}

Mat nullspace(const Mat& m, double rel_cutoff) {
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  double cut = s.size() ? std::max(rel_cutoff * s[0], 1e-12) : 0.0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > cut) ++r;
  return svd.matrixV().rightCols(m.cols() - r);
}

Mat column_span(const Mat& m, double rel_cutoff) {
  Eigen::BDCSVD<Mat> svd(m, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  double cut = s.size() ? std::max(rel_cutoff * s[0], 1e-12) : 0.0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > cut) ++r;
  return svd.matrixU().leftCols(r);
}

double span_distance(const Mat& a, const Mat& b) {
  Mat qa = column_span(a);
  Mat qb = column_span(b);
  if (qa.cols() != qb.cols()) return 1.0;
  if (qa.cols() == 0) return 0.0;
  // residual of projecting each basis vector of one span onto the other
  double worst = 0.0;
  for (int i = 0; i < qa.cols(); ++i)
    worst = std::max(worst, (qa.col(i) - qb * (qb.transpose() * qa.col(i))).norm());
  for (int i = 0; i < qb.cols(); ++i)
    worst = std::max(worst, (qb.col(i) - qa * (qa.transpose() * qb.col(i))).norm());
  return worst;
}

std::vector<std::vector<Rational>> rational_nullspace(
    const std::vector<std::vector<Rational>>& m_in) {
  if (m_in.empty()) return {};
  size_t rows = m_in.size(), cols = m_in[0].size();
  auto m = m_in;
  std::vector<int> pivot_col_of_row;
  size_t row = 0;
  std::vector<bool> is_pivot(cols, false);
  for (size_t col = 0; col < cols && row < rows; ++col) {
    size_t sel = rows;
    for (size_t r = row; r < rows; ++r)
      if (!m[r][col].is_zero()) {
        sel = r;
        break;
      }
    if (sel == rows) continue;
    std::swap(m[row], m[sel]);
    Rational inv = m[row][col].inverse();
    for (size_t c = col; c < cols; ++c) m[row][c] = m[row][c] * inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      Rational f = m[r][col];
      for (size_t c = col; c < cols; ++c) m[r][c] = m[r][c] - f * m[row][c];
    }
    pivot_col_of_row.push_back(int(col));
    is_pivot[col] = true;
    ++row;
  }
  std::vector<std::vector<Rational>> basis;
  for (size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free_col] = Rational(1);
    for (size_t r = 0; r < pivot_col_of_row.size(); ++r)
      v[size_t(pivot_col_of_row[r])] = -m[r][free_col];
    basis.push_back(std::move(v));
  }
  return basis;
}

Mat rref_span(const Mat& basis, double tol) {
  Mat B = basis.transpose();
  Eigen::Index rows = B.rows(), cols = B.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index piv;
    double best = B.col(c).segment(r, rows - r).cwiseAbs().maxCoeff(&piv);
    if (best < tol) continue;
    B.row(r).swap(B.row(r + piv));
    B.row(r) /= B(r, c);
    for (Eigen::Index k = 0; k < rows; ++k)
      if (k != r && std::abs(B(k, c)) > 0) B.row(k) -= B(k, c) * B.row(r);
    ++r;
  }
  return B.topRows(r).transpose();
}

PointSampler::PointSampler(ChartPtr chart, std::uint64_t seed, double margin)
    : chart_(std::move(chart)), rng_(seed), margin_(margin) {}

double PointSampler::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng_);
}

Point PointSampler::next() {
  Point p;
  p.x.resize(size_t(chart_->dim()));
  for (int i = 0; i < chart_->dim(); ++i) {
    auto [lo, hi] = chart_->sample_box(i);
    double pad = margin_ * (hi - lo);
    p.x[size_t(i)] = uniform(lo + pad, hi - pad);
  }
  return p;
}

}  // namespace tractorlab
