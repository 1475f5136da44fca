#pragma once

#include <map>
#include <string>
#include <vector>

#include "s3_mat.hpp"

namespace trip {

enum class Behavior { Polynomial, NonPolynomial };
enum class JordanClass { J1, J2, J3, J4, J5, J6 };

struct UnrecognizedClass : DomainError {
  using DomainError::DomainError;
};

inline const char* to_string(Behavior b) { return b == Behavior::Polynomial ? "polynomial" : "non-polynomial"; }
inline const char* to_string(JordanClass j) {
  static const char* n[] = {"J1", "J2", "J3", "J4", "J5", "J6"};
  return n[static_cast<int>(j)];
}

/// (t-1)^3, (t-1)^2 (t+1), (t-1)(t^2-t-1), t^3-t^2-1, t^3-t-1
inline const CubicPoly kUnipotent = cubic(-1, 3, -3);
inline const CubicPoly kSignedUnipotent = cubic(1, -1, -1);
inline const CubicPoly kGolden = cubic(1, 0, -2);
inline const CubicPoly kCubicA = cubic(-1, 0, -1);
inline const CubicPoly kCubicB = cubic(-1, -1, 0);

/// Jordan class of an integer matrix A among the six TRIP forms.
inline JordanClass jordan_class_of(const QMat& A) {
  CubicPoly p = char_poly(A);
  QMat N = A - QMat::identity();
  if (p == kUnipotent) {
    if (rank(N) != 1) throw UnrecognizedClass("unipotent matrix with rank(A-I) != 1");
    // single off-diagonal entry E_ij; the index outside {i,j} is the standalone fixed direction
    int cnt = 0, ii = 0, jj = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (N(i, j) != 0) { ++cnt; ii = i; jj = j; }
    if (cnt != 1) throw UnrecognizedClass("unipotent matrix is not I + E_ij");
    int standalone = 3 - ii - jj;
    return standalone == 0 ? JordanClass::J3 : JordanClass::J1;
  }
  if (p == kSignedUnipotent) {
    if (rank(N) != 2) throw UnrecognizedClass("(t-1)^2(t+1) with diagonalizable 1-eigenspace");
    return JordanClass::J2;
  }
  if (p == kGolden) return JordanClass::J4;
  if (p == kCubicA) return JordanClass::J5;
  if (p == kCubicB) return JordanClass::J6;
  throw UnrecognizedClass("characteristic polynomial " + to_string(p) + " matches no class");
}

inline JordanClass jordan_class(const PermTriple& t) { return jordan_class_of(f1_of(t).transpose()); }

inline Behavior behavior_of(JordanClass j) {
  return (j == JordanClass::J1 || j == JordanClass::J2 || j == JordanClass::J3) ? Behavior::Polynomial
                                                                               : Behavior::NonPolynomial;
}

inline Behavior behavior(const PermTriple& t) { return behavior_of(jordan_class(t)); }

/// Exact diagonalizability test for the six classes: repeated eigenvalue 1 needs rank(A-I) = 1
/// for a two-dimensional eigenspace; otherwise the roots are simple.
inline bool diagonalizable(const QMat& A) {
  CubicPoly p = char_poly(A);
  QMat N = A - QMat::identity();
  if (p == kUnipotent) return rank(N) == 0;
  if (p == kSignedUnipotent) return rank(N) == 1;
  // remaining classes: discriminant nonzero means simple roots
  const Rational &c = p.c[2], &b = p.c[1], &a0 = p.c[0];
  Rational disc = 18 * c * b * a0 - 4 * c * c * c * a0 + c * c * b * b - 4 * b * b * b - 27 * a0 * a0;
  if (disc != 0) return true;
  throw UnrecognizedClass("repeated root outside the TRIP classes");
}

inline std::map<Behavior, int> census() {
  std::map<Behavior, int> c{{Behavior::Polynomial, 0}, {Behavior::NonPolynomial, 0}};
  for (const auto& t : all_triples()) ++c[behavior(t)];
  return c;
}

/// Behavior of the conjugated triple (rho sigma, gamma, tau1 rho^-1).
inline Behavior conjugation_invariance(const PermTriple& t, S3 rho, S3 gamma) {
  PermTriple c{compose(rho, t.sigma), gamma, compose(t.tau1, inverse(rho))};
  return behavior(c);
}

/// Behavior in the i-th digit (1-based) of a combination map.
inline Behavior combo_behavior(const std::vector<PermTriple>& s, std::size_t i) {
  if (i < 1 || i > s.size()) throw DomainError("schedule index out of range");
  return behavior(s[i - 1]);
}

}  // namespace trip
