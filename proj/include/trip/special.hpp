#pragma once

#include <cmath>
#include <numbers>

namespace trip {

/// Real dilogarithm Li2(x) for x <= 1.
inline double dilog(double x) {
  using std::log;
  constexpr long double pi2_6 = std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6;
  if (x > 1) return NAN;
  if (x == 1) return static_cast<double>(pi2_6);
  if (x == 0) return 0;
  long double z = x;
  auto series = [](long double t) {
    long double s = 0, p = t;
    for (int n = 1; n < 200; ++n) {
      long double term = p / (static_cast<long double>(n) * n);
      s += term;
      if (std::fabs(term) < 1e-21L * std::fabs(s)) break;
      p *= t;
    }
    return s;
  };
  if (z < -1) {
    long double l = std::log(-z);
    return static_cast<double>(-pi2_6 - 0.5L * l * l - dilog(static_cast<double>(1 / z)));
  }
  if (z < 0) {
    long double l = std::log1p(-z);
    return static_cast<double>(-series(z / (z - 1)) - 0.5L * l * l);
  }
  if (z <= 0.5L) return static_cast<double>(series(z));
  return static_cast<double>(pi2_6 - std::log(z) * std::log1p(-z) - series(1 - z));
}

/// dm(t) = t/(e^t - 1), equal to 1 at t = 0.
inline double dm_weight(double t) {
  if (t == 0) return 1.0;
  return t / std::expm1(t);
}

/// s^k e^{-s} / (k+1)!
inline double eta_k(int k, double s) {
  if (s == 0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(s) - s - std::lgamma(k + 2.0));
}

/// Associated Laguerre L_k^(1)(t) by the three-term recurrence.
inline double laguerre_e(int k, double t) {
  double l0 = 1, l1 = 2 - t;
  if (k == 0) return l0;
  for (int n = 1; n < k; ++n) {
    double l2 = ((2 * n + 2 - t) * l1 - (n + 1) * l0) / (n + 1);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

/// J1(2 sqrt(u)) / sqrt(u), equal to 1 at u = 0.
inline double bessel_kernel(double u) {
  if (u < 0) return NAN;
  if (u <= 12) {
    long double s = 0, term = 1;
    for (int m = 0; m < 80; ++m) {
      s += term;
      term *= -static_cast<long double>(u) / ((m + 1.0L) * (m + 2.0L));
      if (std::fabs(term) < 1e-22L) break;
    }
    return static_cast<double>(s);
  }
  double r = std::sqrt(u);
  return std::cyl_bessel_j(1.0, 2 * r) / r;
}

}  // namespace trip
