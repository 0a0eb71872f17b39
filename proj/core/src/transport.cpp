#include <algorithm>
#include <cmath>

#include "tractorlab/geometry.hpp"

namespace tractorlab {

Curve polyline(const std::vector<Point>& vertices) {
  if (vertices.size() < 2) throw std::invalid_argument("polyline needs >= 2 vertices");
  auto verts = std::make_shared<std::vector<Point>>(vertices);
  size_t segs = verts->size() - 1;
  auto locate = [verts, segs](double t) {
    double s = std::clamp(t, 0.0, 1.0) * double(segs);
    size_t k = std::min(size_t(s), segs - 1);
    return std::make_pair(k, s - double(k));
  };
  Curve c;
  c.position = [verts, locate](double t) {
    auto [k, u] = locate(t);
    const Point& a = (*verts)[k];
    const Point& b = (*verts)[k + 1];
    Point p = a;
    for (size_t i = 0; i < p.x.size(); ++i) p.x[i] = (1 - u) * a.x[i] + u * b.x[i];
    return p;
  };
  c.velocity = [verts, segs, locate](double t) {
    auto [k, u] = locate(t);
    (void)u;
    const Point& a = (*verts)[k];
    const Point& b = (*verts)[k + 1];
    Vec v(Eigen::Index(a.x.size()));
    for (size_t i = 0; i < a.x.size(); ++i)
      v[Eigen::Index(i)] = (b.x[i] - a.x[i]) * double(segs);
    return v;
  };
  for (size_t k = 1; k < segs; ++k) c.breaks.push_back(double(k) / double(segs));
  return c;
}

Curve rectangle_loop(const Point& base, int i, int j, double eps) {
  Point p1 = base, p2 = base, p3 = base;
  p1.x[size_t(i)] += eps;
  p2.x[size_t(i)] += eps;
  p2.x[size_t(j)] += eps;
  p3.x[size_t(j)] += eps;
  return polyline({base, p1, p2, p3, base});
}

Vec rk4_linear_transport(const ChartMetric& g, const Curve& curve, const Vec& v0,
                         const std::function<Mat(const Point&, const Vec&)>& rhs_matrix,
                         const TransportOptions& opt) {
  // integrate between velocity breakpoints so RK4 never straddles a kink
  std::vector<double> knots{0.0};
  for (double t : curve.breaks)
    if (t > 0 && t < 1) knots.push_back(t);
  knots.push_back(1.0);
  std::sort(knots.begin(), knots.end());
  Vec v = v0;
  for (size_t seg = 0; seg + 1 < knots.size(); ++seg) {
    double lo = knots[seg], hi = knots[seg + 1];
    if (hi - lo < 1e-15) continue;
    int steps = std::max(1, int(std::ceil((hi - lo) / opt.step)));
    double h = (hi - lo) / steps;
    // velocity queries at hi stay on this segment via a one-sided nudge
    double vel_hi = hi - (hi - lo) * 1e-12;
    auto vel = [&](double t) { return curve.velocity(std::min(t, vel_hi)); };
    for (int s = 0; s < steps; ++s) {
      double t = lo + s * h;
      Point p0 = curve.position(t);
      if (opt.check_signature && !g.signature_ok(p0))
        throw EvalError("metric signature degenerates along the transport curve");
      Point ph = curve.position(t + h / 2);
      Point p1 = curve.position(t + h);
      Mat a1 = rhs_matrix(p0, vel(t));
      Mat a2 = rhs_matrix(ph, vel(t + h / 2));
      Mat a3 = rhs_matrix(p1, vel(t + h));
      Vec k1 = a1 * v;
      Vec k2 = a2 * (v + (h / 2) * k1);
      Vec k3 = a2 * (v + (h / 2) * k2);
      Vec k4 = a3 * (v + h * k3);
      v += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
  }
  return v;
}

Vec parallel_transport_vector(const ChartMetric& g, const Curve& curve, const Vec& v0,
                              const TransportOptions& opt) {
  int n = g.dim();
  if (v0.size() != n) throw std::invalid_argument("transport vector dimension mismatch");
  const CurvatureBundle& curv = g.curvature();
  const Bindings& b = g.bindings();
  auto rhs = [&](const Point& pos, const Vec& vel) {
    Mat A = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        double acc = 0;
        for (int i = 0; i < n; ++i) {
          if (vel[i] == 0) continue;
          const Expr& G = curv.christoffel[size_t(k)][size_t(i)][size_t(j)];
          if (G.is_zero()) continue;
          acc += vel[i] * G.evaluate(pos, b);
        }
        A(k, j) = -acc;
      }
    return A;
  };
  return rk4_linear_transport(g, curve, v0, rhs, opt);
}

}  // namespace tractorlab
