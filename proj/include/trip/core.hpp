#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "expr.hpp"
#include "s3_mat.hpp"

namespace trip {

struct DegenerateVertex : DomainError {
  using DomainError::DomainError;
};
struct OutsideDomain : DomainError {
  using DomainError::DomainError;
};
struct KMaxExceeded : DomainError {
  using DomainError::DomainError;
};

template <class T>
struct Point {
  T x{}, y{};
  friend bool operator==(const Point&, const Point&) = default;
};
using QPoint = Point<Rational>;
using DPoint = Point<double>;

inline std::string to_string(const QPoint& p) { return to_string(p.x) + "," + to_string(p.y); }

inline QPoint parse_point(std::string_view s) {
  auto c = s.find(',');
  if (c == std::string_view::npos || s.find(',', c + 1) != std::string_view::npos)
    throw ParseError("point '" + std::string(s) + "' must be x,y");
  return {parse_rational(s.substr(0, c)), parse_rational(s.substr(c + 1))};
}

inline DPoint to_double(const QPoint& p) { return {p.x.convert_to<double>(), p.y.convert_to<double>()}; }

/// Closed triangle 1 >= x >= y >= 0.
template <class T>
bool in_closed_triangle(const Point<T>& p) {
  return p.x <= T(1) && p.y <= p.x && p.y >= T(0);
}
template <class T>
bool in_open_triangle(const Point<T>& p) {
  return p.x < T(1) && p.y < p.x && p.y > T(0);
}

template <class T>
std::array<T, 3> homogeneous(const Point<T>& p) {
  return {T(1), p.x, p.y};
}

template <class T>
Point<T> project(const std::array<T, 3>& v) {
  if (v[0] == T(0)) throw ZeroDenominator("projective point at infinity");
  return {v[1] / v[0], v[2] / v[0]};
}

inline BigInt floor_q(const Rational& q) {
  BigInt n = numerator(q), d = denominator(q);
  BigInt f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return f;
}
inline BigInt ceil_q(const Rational& q) { return -floor_q(-q); }

template <class T>
T shoelace(const std::array<Point<T>, 3>& v) {
  T a = (v[1].x - v[0].x) * (v[2].y - v[0].y) - (v[2].x - v[0].x) * (v[1].y - v[0].y);
  return (a < T(0) ? T(-a) : a) / T(2);
}

enum class DigitStatus { Digit, Terminated, OutsideDomain, KMaxExceeded };

struct DigitResult {
  DigitStatus status = DigitStatus::Digit;
  long k = -1;
  bool ok() const { return status == DigitStatus::Digit; }
};

inline const char* to_string(DigitStatus s) {
  switch (s) {
    case DigitStatus::Digit: return "digit";
    case DigitStatus::Terminated: return "terminated";
    case DigitStatus::OutsideDomain: return "outside-domain";
    case DigitStatus::KMaxExceeded: return "kmax-exceeded";
  }
  return "";
}

inline constexpr long kDefaultExactKMax = 1000000;
inline constexpr long kDefaultFloatKMax = 10000;

/// Power of a matrix whose square is unipotent of index two: M^(2m+r) = (I + m(M^2 - I)) M^r.
template <class T>
struct ParityPower {
  Mat3<T> m1, n2;  // M, M^2 - I
  Mat3<T> operator()(const T& m, int r) const {
    Mat3<T> p = Mat3<T>::identity() + m * n2;
    return r ? p * m1 : p;
  }
};

/// One TRIP map with exact arithmetic.
class TripMap {
 public:
  explicit TripMap(PermTriple t) : t_(t) {
    f0_ = f0_of(t);
    f1_ = f1_of(t);
    f0i_ = f0_.inverse();
    f1i_ = f1_.inverse();
    QMat I = QMat::identity();
    QMat n2 = f1_ * f1_ - I;
    polynomial_ = (n2 * n2 == QMat());
    fwd_ = {f1_, n2};
    inv_ = {f1i_, f1i_ * f1i_ - I};
  }

  const PermTriple& triple() const { return t_; }
  const QMat& f0() const { return f0_; }
  const QMat& f1() const { return f1_; }
  /// True when F1^2 - I squares to zero, i.e. the parity-affine power formula holds.
  bool parity_affine() const { return polynomial_; }

  QMat f1_pow(long k) const {
    if (polynomial_) return fwd_(Rational(k / 2), static_cast<int>(k % 2));
    return mat_pow(f1_, static_cast<std::uint64_t>(k));
  }
  QMat f1_inv_pow(long k) const {
    if (polynomial_) return inv_(Rational(k / 2), static_cast<int>(k % 2));
    return mat_pow(f1i_, static_cast<std::uint64_t>(k));
  }

  QMat cone(long k) const {
    check_k(k);
    return Vmat() * f1_pow(k) * f0_;
  }

  std::array<QPoint, 3> vertices(long k) const {
    QMat c = cone(k);
    std::array<QPoint, 3> v;
    for (int j = 0; j < 3; ++j) {
      if (c(0, j) == 0) throw DegenerateVertex("vertex at infinity for k=" + std::to_string(k));
      v[j] = {c(1, j) / c(0, j), c(2, j) / c(0, j)};
    }
    return v;
  }

  /// Affine barycentric coordinates of p with respect to the projected vertices of Delta_k.
  std::array<Rational, 3> barycentric(long k, const QPoint& p) const {
    QMat c = cone(k);
    auto a = homog_coords(k, p);
    return {a[0] * c(0, 0), a[1] * c(0, 1), a[2] * c(0, 2)};
  }

  bool contains(long k, const QPoint& p) const {
    auto a = homog_coords(k, p);
    return a[0] >= 0 && a[1] >= 0 && a[2] >= 0;
  }

  /// Smallest k with p in the closed Delta_k.
  DigitResult digit(const QPoint& p, long k_max = kDefaultExactKMax) const {
    check_point(p);
    if (p.y == 0) return {DigitStatus::Terminated};
    if (!polynomial_) return digit_scan(p, k_max);
    auto v = homogeneous(p);
    QMat vinv = Vinv();
    std::optional<BigInt> best;
    bool beyond = false;
    for (int r = 0; r < 2; ++r) {
      auto base = f1_pow_inv_r(r) * (vinv * v);
      auto alpha = f0i_ * base;
      auto beta = f0i_ * (inv_.n2 * base);
      BigInt lo = 0;
      std::optional<BigInt> hi;
      bool feasible = true;
      for (int i = 0; i < 3; ++i) {
        if (beta[i] > 0) {
          lo = std::max(lo, ceil_q(-alpha[i] / beta[i]));
        } else if (beta[i] < 0) {
          BigInt h = floor_q(alpha[i] / -beta[i]);
          hi = hi ? std::min(*hi, h) : h;
        } else if (alpha[i] < 0) {
          feasible = false;
        }
      }
      if (!feasible || (hi && *hi < lo)) continue;
      BigInt k = 2 * lo + r;
      if (k > k_max) { beyond = true; continue; }
      if (!best || k < *best) best = k;
    }
    if (best) {
      long k = best->convert_to<long>();
      if (!contains(k, p)) throw std::logic_error("digit fast path disagrees with barycentric test");
      return {DigitStatus::Digit, k};
    }
    return {beyond ? DigitStatus::KMaxExceeded : DigitStatus::OutsideDomain};
  }

  /// Reference linear scan. Stops early once p leaves the cone of V F1^k, which contains
  /// every later subtriangle because F1^j F0 has non-negative entries.
  DigitResult digit_scan(const QPoint& p, long k_max = kDefaultExactKMax) const {
    check_point(p);
    if (p.y == 0) return {DigitStatus::Terminated};
    auto u = Vinv() * homogeneous(p);
    for (long k = 0; k <= k_max; ++k) {
      if (u[0] < 0 || u[1] < 0 || u[2] < 0) return {DigitStatus::OutsideDomain};
      auto a = f0i_ * u;
      if (a[0] >= 0 && a[1] >= 0 && a[2] >= 0) return {DigitStatus::Digit, k};
      u = f1i_ * u;
    }
    return {DigitStatus::KMaxExceeded};
  }

  /// T restricted to Delta_k.
  QPoint apply(long k, const QPoint& p) const { return project(Vmat() * homog_coords(k, p)); }

  /// Preimage of q inside Delta_k.
  QPoint inverse_branch(long k, const QPoint& q) const { return project(branch_matrix(k) * homogeneous(q)); }

  /// 1/|Jac T| at the k-th preimage of q.
  Rational jacobian_recip(long k, const QPoint& q) const {
    QMat n = branch_matrix(k);
    auto w = n * homogeneous(q);
    if (w[0] == 0) throw ZeroDenominator("Jacobian denominator vanishes");
    Rational d = n.det(), den = w[0] * w[0] * w[0];
    Rational r = d / den;
    return r < 0 ? Rational(-r) : r;
  }

  /// V F1^k F0 V^-1, acting on column vectors (1,x,y).
  QMat branch_matrix(long k) const { return cone(k) * Vinv(); }

  /// V F0^-1 F1^-k V^-1.
  QMat forward_matrix(long k) const {
    check_k(k);
    return Vmat() * f0i_ * f1_inv_pow(k) * Vinv();
  }

 private:
  PermTriple t_;
  QMat f0_, f1_, f0i_, f1i_;
  bool polynomial_ = false;
  ParityPower<Rational> fwd_, inv_;

  QMat f1_pow_inv_r(int r) const { return r ? f1i_ : QMat::identity(); }

  std::array<Rational, 3> homog_coords(long k, const QPoint& p) const {
    check_k(k);
    return f0i_ * (f1_inv_pow(k) * (Vinv() * homogeneous(p)));
  }

  static void check_k(long k) {
    if (k < 0) throw DomainError("digit index must be non-negative");
  }
  static void check_point(const QPoint& p) {
    if (!in_closed_triangle(p)) throw DomainError("point " + to_string(p) + " is outside the triangle");
  }
};

/// Double-precision version of the same map, used for orbits and transfer sums.
class FloatMap {
 public:
  explicit FloatMap(PermTriple t) : FloatMap(TripMap(t)) {}
  explicit FloatMap(const TripMap& m) : t_(m.triple()), poly_(m.parity_affine()) {
    using D = Mat3<double>;
    f0_ = m.f0().cast<double>();
    f1_ = m.f1().cast<double>();
    f0i_ = m.f0().inverse().cast<double>();
    f1i_ = m.f1().inverse().cast<double>();
    D I = D::identity();
    fwd_ = {f1_, f1_ * f1_ - I};
    inv_ = {f1i_, f1i_ * f1i_ - I};
    v_ = Vmat<double>();
    vi_ = Vinv<double>();
    for (int r = 0; r < 2; ++r) {
      D fr = r ? f1i_ : I;
      a_[r] = f0i_ * fr * vi_;
      b_[r] = f0i_ * inv_.n2 * fr * vi_;
      c_[r] = v_ * (r ? f1_ : I) * f0_ * vi_;
      d_[r] = v_ * fwd_.n2 * (r ? f1_ : I) * f0_ * vi_;
    }
  }

  const PermTriple& triple() const { return t_; }
  bool parity_affine() const { return poly_; }

  /// Branch matrix V F1^(2m+r) F0 V^-1 for real m >= 0 (parity-affine maps only).
  Mat3<double> branch_matrix_real(double m, int r) const { return c_[r] + m * d_[r]; }

  Mat3<double> branch_matrix(long k) const {
    if (poly_) return branch_matrix_real(static_cast<double>(k / 2), static_cast<int>(k % 2));
    return v_ * mat_pow(f1_, static_cast<std::uint64_t>(k)) * f0_ * vi_;
  }

  /// Preimage in Delta_k and its weight 1/|Jac|.
  struct Branch {
    DPoint p;
    double weight;
  };
  static Branch branch_from(const Mat3<double>& n, const DPoint& q) {
    auto w = n * std::array<double, 3>{1.0, q.x, q.y};
    double d = std::fabs(w[0]);
    return {{w[1] / w[0], w[2] / w[0]}, 1.0 / (d * d * d)};
  }
  Branch branch(long k, const DPoint& q) const { return branch_from(branch_matrix(k), q); }

  DigitResult digit(const DPoint& p, long k_max = kDefaultFloatKMax) const {
    if (std::fabs(p.y) < 1e-13) return {DigitStatus::Terminated};
    if (!poly_) return digit_scan(p, k_max);
    std::array<double, 3> v{1.0, p.x, p.y};
    long best = -1;
    bool beyond = false;
    for (int r = 0; r < 2; ++r) {
      auto al = a_[r] * v, be = b_[r] * v;
      double lo = 0, hi = std::numeric_limits<double>::infinity();
      bool feasible = true;
      for (int i = 0; i < 3; ++i) {
        double tol = 1e-12 * (std::fabs(al[i]) + std::fabs(be[i]));
        if (be[i] > tol) lo = std::max(lo, -al[i] / be[i]);
        else if (be[i] < -tol) hi = std::min(hi, al[i] / -be[i]);
        else if (al[i] < -1e-12) feasible = false;
      }
      if (!feasible) continue;
      double m = std::ceil(lo - 1e-12 * (1 + lo));
      if (m < 0) m = 0;
      if (m > hi + 1e-12 * (1 + std::fabs(hi))) continue;
      double k = 2 * m + r;
      if (k > static_cast<double>(k_max)) { beyond = true; continue; }
      if (best < 0 || k < best) best = static_cast<long>(k);
    }
    if (best >= 0) return {DigitStatus::Digit, best};
    return {beyond ? DigitStatus::KMaxExceeded : DigitStatus::OutsideDomain};
  }

  DigitResult digit_scan(const DPoint& p, long k_max = kDefaultFloatKMax) const {
    if (std::fabs(p.y) < 1e-13) return {DigitStatus::Terminated};
    auto u = vi_ * std::array<double, 3>{1.0, p.x, p.y};
    for (long k = 0; k <= k_max; ++k) {
      double sc = std::max({std::fabs(u[0]), std::fabs(u[1]), std::fabs(u[2])}) * 1e-12;
      if (u[0] < -sc || u[1] < -sc || u[2] < -sc) return {DigitStatus::OutsideDomain};
      auto a = f0i_ * u;
      if (a[0] >= -sc && a[1] >= -sc && a[2] >= -sc) return {DigitStatus::Digit, k};
      u = f1i_ * u;
    }
    return {DigitStatus::KMaxExceeded};
  }

  DPoint apply(long k, const DPoint& p) const {
    std::array<double, 3> v{1.0, p.x, p.y}, a;
    if (poly_) {
      int r = static_cast<int>(k % 2);
      double m = static_cast<double>(k / 2);
      auto al = a_[r] * v, be = b_[r] * v;
      for (int i = 0; i < 3; ++i) a[i] = al[i] + m * be[i];
    } else {
      a = f0i_ * (mat_pow(f1i_, static_cast<std::uint64_t>(k)) * (vi_ * v));
    }
    auto w = v_ * a;
    return {w[1] / w[0], w[2] / w[0]};
  }

 private:
  PermTriple t_;
  bool poly_;
  Mat3<double> f0_, f1_, f0i_, f1i_, v_, vi_;
  ParityPower<double> fwd_, inv_;
  std::array<Mat3<double>, 2> a_, b_, c_, d_;
};

/// Cyclic schedule of triples for combination maps.
struct MapSchedule {
  std::vector<PermTriple> triples;
};

inline MapSchedule parse_schedule(std::string_view s) {
  MapSchedule m;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == ';') {
      m.triples.push_back(parse_triple(s.substr(start, i - start)));
      start = i + 1;
    }
  return m;
}

struct DigitSequence {
  std::vector<long> digits;
  bool terminated = false;
};

/// Up to n digits of p, applying the schedule cyclically with exact arithmetic.
inline DigitSequence expand(const MapSchedule& s, QPoint p, long n, long k_max = kDefaultExactKMax) {
  if (s.triples.empty()) throw DomainError("empty schedule");
  std::vector<TripMap> maps;
  for (auto& t : s.triples) maps.emplace_back(t);
  DigitSequence out;
  for (long i = 0; i < n; ++i) {
    const TripMap& m = maps[i % maps.size()];
    DigitResult d = m.digit(p, k_max);
    if (d.status == DigitStatus::Terminated) { out.terminated = true; break; }
    if (d.status == DigitStatus::OutsideDomain)
      throw OutsideDomain("step " + std::to_string(i) + ": point " + to_string(p) + " lies in no subtriangle of " + to_string(m.triple()));
    if (d.status == DigitStatus::KMaxExceeded)
      throw KMaxExceeded("step " + std::to_string(i) + ": no digit up to k_max=" + std::to_string(k_max));
    out.digits.push_back(d.k);
    try {
      p = m.apply(d.k, p);
    } catch (const ZeroDenominator&) {
      out.terminated = true;
      break;
    }
  }
  return out;
}

inline DigitSequence expand(const PermTriple& t, const QPoint& p, long n, long k_max = kDefaultExactKMax) {
  return expand(MapSchedule{{t}}, p, n, k_max);
}

}  // namespace trip
