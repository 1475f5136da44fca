#pragma once

#include <array>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core.hpp"

namespace trip {

struct QuadratureFailure : DomainError {
  using DomainError::DomainError;
};

struct QuadResult {
  double value = 0;
  double error = 0;
};

/// Adaptive Gauss-Kronrod on [a, b]; b may be +infinity. tol is relative, the returned
/// error is boost's absolute estimate.
template <class F>
QuadResult integrate(F&& f, double a, double b, double tol = 1e-12, unsigned max_depth = 15) {
  double err = 0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol, &err);
  if (!std::isfinite(v)) throw QuadratureFailure("non-finite integral");
  if (std::isinf(b)) err *= 2;
  return {v, err};
}

/// Integral of f over [a, inf) for f with a power-law tail of order at least 2 beyond an unknown
/// knee. Doubling segments are integrated until three successive ratios agree, then the rest is
/// mapped onto [0, 1] by m = b/u.
template <class F>
QuadResult integrate_tail(F&& f, double a, double tol = 1e-12, int max_segments = 200) {
  QuadResult total;
  double lo = a;
  for (int j = 0; j < max_segments; ++j) {
    double f1 = f(lo), f2 = f(2 * lo), f4 = f(4 * lo);
    if (f1 == 0 && f2 == 0 && f4 == 0) return total;
    if (f1 != 0 && f2 != 0) {
      double r1 = f2 / f1, r2 = f4 / f2;
      if (r1 > 0 && r1 < 0.3 && std::fabs(r2 - r1) < 1e-3 * r1) break;
    }
    QuadResult r = integrate(f, lo, 2 * lo, tol);
    total.value += r.value;
    total.error += r.error;
    lo *= 2;
  }
  auto g = [&](double u) { return u == 0 ? 0.0 : f(lo / u) * lo / (u * u); };
  QuadResult r = integrate(g, 0.0, 1.0, tol);
  total.value += r.value;
  total.error += r.error;
  return total;
}

/// Integral over the triangle with vertices v. The triangle is cut into six pieces, each
/// touching exactly one original vertex, and each piece is Duffy-collapsed onto that vertex so
/// that 1/r corner singularities become bounded.
template <class F>
QuadResult integrate_triangle(F&& f, const std::array<DPoint, 3>& v, double tol = 1e-12) {
  DPoint c{(v[0].x + v[1].x + v[2].x) / 3, (v[0].y + v[1].y + v[2].y) / 3};
  QuadResult total;
  for (int i = 0; i < 3; ++i) {
    const DPoint& p = v[i];
    for (int s = 1; s <= 2; ++s) {
      const DPoint& o = v[(i + s) % 3];
      DPoint m{(p.x + o.x) / 2, (p.y + o.y) / 2};
      // piece (p, m, c); Duffy: x = p + u (m - p) + u w (c - m), jacobian 2 |area| u
      double area2 = std::fabs((m.x - p.x) * (c.y - p.y) - (c.x - p.x) * (m.y - p.y));
      if (area2 == 0) continue;
      double inner_err = 0;
      auto outer = [&](double u) {
        if (u == 0) return 0.0;
        auto inner = [&](double w) {
          double x = p.x + u * (m.x - p.x) + u * w * (c.x - m.x);
          double y = p.y + u * (m.y - p.y) + u * w * (c.y - m.y);
          return f(x, y);
        };
        QuadResult r = integrate(inner, 0.0, 1.0, tol * 0.1, 15);
        inner_err = std::max(inner_err, r.error);
        return r.value * u * area2;
      };
      QuadResult r = integrate(outer, 0.0, 1.0, tol, 15);
      total.value += r.value;
      total.error += r.error + inner_err * area2;
    }
  }
  return total;
}

}  // namespace trip
