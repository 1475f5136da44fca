#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace trip {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// Base of every error raised by the library for a mathematically invalid request.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed names, points or expressions.
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

// GMP would read a leading 0 as an octal prefix
inline BigInt big_decimal(std::string_view v) {
  bool neg = !v.empty() && v[0] == '-';
  if (!v.empty() && (v[0] == '-' || v[0] == '+')) v.remove_prefix(1);
  while (v.size() > 1 && v[0] == '0') v.remove_prefix(1);
  BigInt r(std::string{v});
  return neg ? BigInt(-r) : r;
}

inline Rational parse_rational(std::string_view s) {
  auto trim = [](std::string_view v) {
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
    return v;
  };
  s = trim(s);
  if (s.empty()) throw ParseError("empty rational");
  auto valid_int = [](std::string_view v) {
    if (!v.empty() && (v[0] == '-' || v[0] == '+')) v.remove_prefix(1);
    if (v.empty()) return false;
    for (char c : v)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    auto dot = s.find('.');
    if (dot != std::string_view::npos) {
      // decimal literal, read exactly
      std::string ip(s.substr(0, dot)), fp(s.substr(dot + 1));
      bool neg = !ip.empty() && ip[0] == '-';
      if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip.erase(0, 1);
      if (ip.empty()) ip = "0";
      if (!valid_int(ip) || (!fp.empty() && !valid_int(fp)) || fp.find_first_of("+-") != std::string::npos)
        throw ParseError("malformed number '" + std::string(s) + "'");
      BigInt den = 1;
      for (size_t i = 0; i < fp.size(); ++i) den *= 10;
      std::string digits = ip + fp;
      digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
      Rational r(BigInt(digits), den);
      return neg ? Rational(-r) : r;
    }
    if (!valid_int(s)) throw ParseError("malformed number '" + std::string(s) + "'");
    return Rational(big_decimal(s));
  }
  auto n = trim(s.substr(0, slash)), d = trim(s.substr(slash + 1));
  if (!valid_int(n) || !valid_int(d)) throw ParseError("malformed rational '" + std::string(s) + "'");
  BigInt den = big_decimal(d);
  if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
  return Rational(big_decimal(n), den);
}

// ---------------------------------------------------------------------------
// 3x3 matrices

template <class T>
struct Mat3 {
  std::array<std::array<T, 3>, 3> a{};

  static Mat3 identity() {
    Mat3 m;
    for (int i = 0; i < 3; ++i) m.a[i][i] = T(1);
    return m;
  }
  static Mat3 from(std::initializer_list<std::initializer_list<long>> rows) {
    Mat3 m;
    int i = 0;
    for (auto& r : rows) {
      int j = 0;
      for (long v : r) m.a[i][j++] = T(v);
      ++i;
    }
    return m;
  }

  T& operator()(int i, int j) { return a[i][j]; }
  const T& operator()(int i, int j) const { return a[i][j]; }

  friend bool operator==(const Mat3& x, const Mat3& y) { return x.a == y.a; }

  friend Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        T s(0);
        for (int l = 0; l < 3; ++l) s += x.a[i][l] * y.a[l][j];
        r.a[i][j] = s;
      }
    return r;
  }
  friend Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = x.a[i][j] + y.a[i][j];
    return r;
  }
  friend Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = x.a[i][j] - y.a[i][j];
    return r;
  }
  friend Mat3 operator*(const T& s, const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = s * x.a[i][j];
    return r;
  }

  std::array<T, 3> operator*(const std::array<T, 3>& v) const {
    std::array<T, 3> r;
    for (int i = 0; i < 3; ++i) r[i] = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
    return r;
  }

  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = a[j][i];
    return r;
  }

  T det() const {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  }

  T trace() const { return a[0][0] + a[1][1] + a[2][2]; }

  Mat3 adjugate() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
        r.a[i][j] = a[i1][j1] * a[i2][j2] - a[i1][j2] * a[i2][j1];
      }
    return r;
  }

  Mat3 inverse() const {
    T d = det();
    if (d == T(0)) throw DomainError("singular matrix");
    Mat3 adj = adjugate();
    for (auto& row : adj.a)
      for (auto& v : row) v /= d;
    return adj;
  }

  template <class U>
  Mat3<U> cast() const {
    Mat3<U> r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = static_cast<U>(a[i][j]);
    return r;
  }
};

template <class T>
Mat3<T> mat_pow(const Mat3<T>& m, std::uint64_t k) {
  Mat3<T> r = Mat3<T>::identity(), b = m;
  while (k) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

/// Rank by exact elimination.
inline int rank(Mat3<Rational> m) {
  int r = 0;
  for (int c = 0; c < 3 && r < 3; ++c) {
    int p = -1;
    for (int i = r; i < 3; ++i)
      if (m.a[i][c] != 0) { p = i; break; }
    if (p < 0) continue;
    std::swap(m.a[p], m.a[r]);
    for (int i = r + 1; i < 3; ++i) {
      Rational f = m.a[i][c] / m.a[r][c];
      for (int j = c; j < 3; ++j) m.a[i][j] -= f * m.a[r][j];
    }
    ++r;
  }
  return r;
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Mat3<T>& m) {
  os << '[';
  for (int i = 0; i < 3; ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < 3; ++j) {
      if (j) os << ',';
      if constexpr (std::is_same_v<T, Rational>) os << to_string(m.a[i][j]);
      else os << m.a[i][j];
    }
    os << ']';
  }
  return os << ']';
}

using QMat = Mat3<Rational>;

// ---------------------------------------------------------------------------
// S3

/// An element of S3. Matrices act on row vectors from the right: e_i P = e_{p(i)}.
enum class S3 : std::uint8_t { e, p12, p13, p23, p123, p132 };

inline constexpr std::array<S3, 6> all_s3{S3::e, S3::p12, S3::p13, S3::p23, S3::p123, S3::p132};

/// Image table, 0-based: image(p)[i] = p(i).
inline constexpr std::array<int, 3> image(S3 p) {
  switch (p) {
    case S3::e: return {0, 1, 2};
    case S3::p12: return {1, 0, 2};
    case S3::p13: return {2, 1, 0};
    case S3::p23: return {0, 2, 1};
    case S3::p123: return {1, 2, 0};
    case S3::p132: return {2, 0, 1};
  }
  return {0, 1, 2};
}

inline S3 from_image(std::array<int, 3> im) {
  for (S3 p : all_s3)
    if (image(p) == im) return p;
  throw std::logic_error("not a permutation");
}

/// p*q: apply p, then q.
inline S3 compose(S3 p, S3 q) {
  auto ip = image(p), iq = image(q);
  return from_image({iq[ip[0]], iq[ip[1]], iq[ip[2]]});
}

inline S3 inverse(S3 p) {
  auto ip = image(p);
  std::array<int, 3> r{};
  for (int i = 0; i < 3; ++i) r[ip[i]] = i;
  return from_image(r);
}

inline std::string_view name(S3 p) {
  static constexpr std::array<std::string_view, 6> n{"e", "12", "13", "23", "123", "132"};
  return n[static_cast<int>(p)];
}

inline S3 parse_s3(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  for (S3 p : all_s3)
    if (name(p) == s) return p;
  throw ParseError("unknown permutation '" + std::string(s) + "' (expected e,12,13,23,123,132)");
}

template <class T = Rational>
Mat3<T> perm_matrix(S3 p) {
  Mat3<T> m;
  auto im = image(p);
  for (int i = 0; i < 3; ++i) m.a[i][im[i]] = T(1);
  return m;
}

// ---------------------------------------------------------------------------
// structural matrices

template <class T = Rational>
Mat3<T> F0() { return Mat3<T>::from({{0, 0, 1}, {1, 0, 0}, {0, 1, 1}}); }
template <class T = Rational>
Mat3<T> F1() { return Mat3<T>::from({{1, 0, 1}, {0, 1, 0}, {0, 0, 1}}); }
template <class T = Rational>
Mat3<T> Vmat() { return Mat3<T>::from({{1, 1, 1}, {0, 1, 1}, {0, 0, 1}}); }
template <class T = Rational>
Mat3<T> Vinv() { return Mat3<T>::from({{1, -1, 0}, {0, 1, -1}, {0, 0, 1}}); }

struct PermTriple {
  S3 sigma = S3::e, tau0 = S3::e, tau1 = S3::e;
  friend bool operator==(const PermTriple&, const PermTriple&) = default;
  friend auto operator<=>(const PermTriple&, const PermTriple&) = default;
  int index() const {
    return 36 * static_cast<int>(sigma) + 6 * static_cast<int>(tau0) + static_cast<int>(tau1);
  }
};

inline std::string to_string(const PermTriple& t) {
  std::string s(name(t.sigma));
  s += ',';
  s += name(t.tau0);
  s += ',';
  s += name(t.tau1);
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const PermTriple& t) { return os << to_string(t); }

inline PermTriple parse_triple(std::string_view s) {
  std::array<std::string_view, 3> part;
  int n = 0;
  size_t start = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      if (n == 3) throw ParseError("triple '" + std::string(s) + "' has more than three parts");
      part[n++] = s.substr(start, i - start);
      start = i + 1;
    }
  }
  if (n != 3) throw ParseError("triple '" + std::string(s) + "' must be S,T0,T1");
  return {parse_s3(part[0]), parse_s3(part[1]), parse_s3(part[2])};
}

inline std::array<PermTriple, 216> all_triples() {
  std::array<PermTriple, 216> r;
  int i = 0;
  for (S3 s : all_s3)
    for (S3 a : all_s3)
      for (S3 b : all_s3) r[i++] = {s, a, b};
  return r;
}

template <class T = Rational>
Mat3<T> f0_of(const PermTriple& t) {
  return perm_matrix<T>(t.sigma) * F0<T>() * perm_matrix<T>(t.tau0);
}
template <class T = Rational>
Mat3<T> f1_of(const PermTriple& t) {
  return perm_matrix<T>(t.sigma) * F1<T>() * perm_matrix<T>(t.tau1);
}

// ---------------------------------------------------------------------------
// characteristic polynomials

/// Monic cubic t^3 + c[2] t^2 + c[1] t + c[0]; c[3] is stored and always 1.
struct CubicPoly {
  std::array<Rational, 4> c{0, 0, 0, 1};
  friend bool operator==(const CubicPoly&, const CubicPoly&) = default;

  Rational operator()(const Rational& t) const { return ((t + c[2]) * t + c[1]) * t + c[0]; }
  double operator()(double t) const {
    return ((t + c[2].convert_to<double>()) * t + c[1].convert_to<double>()) * t +
           c[0].convert_to<double>();
  }
};

/// Builds a monic cubic from {c0, c1, c2}.
inline CubicPoly cubic(long c0, long c1, long c2) { return {{Rational(c0), Rational(c1), Rational(c2), Rational(1)}}; }

inline std::string to_string(const CubicPoly& p) {
  std::string s = "t^3";
  auto term = [&](const Rational& c, const char* mono) {
    if (c == 0) return;
    bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    s += neg ? '-' : '+';
    if (*mono == 0) { s += to_string(a); return; }
    if (a != 1) s += to_string(a) + "*";
    s += mono;
  };
  term(p.c[2], "t^2");
  term(p.c[1], "t");
  term(p.c[0], "");
  return s;
}

/// det(tI - m) by exact expansion.
inline CubicPoly char_poly(const QMat& m) {
  Rational minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                    m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  return {{Rational(-m.det()), minors, Rational(-m.trace()), Rational(1)}};
}

}  // namespace trip
