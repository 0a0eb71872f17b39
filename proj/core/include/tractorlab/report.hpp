#pragma once

#include <string>
#include <vector>

#include "tractorlab/expr.hpp"

namespace tractorlab {

/// Outcome of a sampled check. `failures` lists points whose residual
/// exceeded the tolerance; `singular_points` lists points excluded from the
/// verdict because a rank/pivot test degenerated there.
struct CheckReport {
  std::string check;
  int samples = 0;
  double tolerance = 0;
  double max_residual = 0;
  bool pass = false;
  std::vector<std::pair<Point, double>> failures;
  std::vector<Point> singular_points;

  void record(const Point& p, double residual) {
    if (residual > max_residual) max_residual = residual;
    if (residual > tolerance) failures.emplace_back(p, residual);
  }
  void finalize() { pass = failures.empty(); }
};

}  // namespace tractorlab
