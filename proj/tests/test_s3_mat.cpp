#include <gtest/gtest.h>

#include <set>

#include "trip/s3_mat.hpp"

using namespace trip;

namespace {

QMat M(std::initializer_list<std::initializer_list<long>> rows) {
  QMat m;
  int i = 0;
  for (auto& r : rows) {
    int j = 0;
    for (long v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Fibonacci with f_{-2}=1, f_{-1}=0, f_0=1
BigInt fib(long k) {
  if (k == -2) return 1;
  if (k == -1) return 0;
  BigInt a = 0, b = 1;
  for (long i = 0; i < k; ++i) {
    BigInt c = a + b;
    a = b;
    b = c;
  }
  return b;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
  EXPECT_EQ(parse_rational("-6/8"), Rational(-3, 4));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("0.075"), Rational(3, 40));
  EXPECT_EQ(parse_rational("-0.5"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("010"), Rational(10));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(to_string(Rational(2, 4)), "1/2");
  EXPECT_EQ(to_string(Rational(5)), "5");
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational("abc"), ParseError);
}

TEST(S3, GroupAxioms) {
  for (S3 p : all_s3) {
    EXPECT_EQ(compose(p, inverse(p)), S3::e);
    EXPECT_EQ(compose(S3::e, p), p);
    for (S3 q : all_s3) {
      S3 pq = compose(p, q);
      EXPECT_NE(std::find(all_s3.begin(), all_s3.end(), pq), all_s3.end());
      for (S3 r : all_s3) EXPECT_EQ(compose(compose(p, q), r), compose(p, compose(q, r)));
    }
  }
}

TEST(S3, NamesRoundTrip) {
  for (S3 p : all_s3) EXPECT_EQ(parse_s3(name(p)), p);
  EXPECT_EQ(parse_s3("(13)"), S3::p13);
  EXPECT_THROW(parse_s3("14"), ParseError);
}

TEST(S3, PermMatrices) {
  EXPECT_EQ(perm_matrix(S3::e), QMat::identity());
  EXPECT_EQ(perm_matrix(S3::p12), M({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}));
  EXPECT_EQ(perm_matrix(S3::p123), M({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}));
  for (S3 p : all_s3) {
    QMat m = perm_matrix(p);
    for (int i = 0; i < 3; ++i) {
      int row = 0, col = 0;
      for (int j = 0; j < 3; ++j) {
        row += m(i, j) == 1;
        col += m(j, i) == 1;
      }
      EXPECT_EQ(row, 1);
      EXPECT_EQ(col, 1);
    }
  }
}

TEST(S3, PermMatrixIsHomomorphism) {
  for (S3 p : all_s3)
    for (S3 q : all_s3) EXPECT_EQ(perm_matrix(compose(p, q)), perm_matrix(p) * perm_matrix(q));
}

TEST(Mat3, BaseMatrices) {
  EXPECT_EQ(F0(), M({{0, 0, 1}, {1, 0, 0}, {0, 1, 1}}));
  EXPECT_EQ(F1(), M({{1, 0, 1}, {0, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ(Vmat() * Vinv(), QMat::identity());
  EXPECT_EQ(F0().inverse() * F0(), QMat::identity());
}

TEST(Mat3, WorkedProducts) {
  PermTriple t23{S3::p23, S3::p23, S3::p23};
  EXPECT_EQ(f0_of(t23), M({{0, 1, 0}, {0, 1, 1}, {1, 0, 0}}));
  EXPECT_EQ(f1_of(t23), M({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ(f1_of(parse_triple("e,e,13")), M({{1, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
}

TEST(Mat3, DeterminantsAreUnit) {
  for (auto& t : all_triples()) {
    EXPECT_EQ(abs(f0_of(t).det()), 1);
    EXPECT_EQ(abs(f1_of(t).det()), 1);
  }
}

TEST(Mat3, InverseAdjugateTranspose) {
  QMat a = M({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});
  EXPECT_EQ(a * a.inverse(), QMat::identity());
  EXPECT_EQ(a.adjugate() * a, a.det() * QMat::identity());
  EXPECT_EQ(a.transpose().transpose(), a);
  EXPECT_EQ(a.det(), 18);
  EXPECT_THROW(QMat().inverse(), DomainError);
}

TEST(MatPow, Basics) {
  EXPECT_EQ(mat_pow(F1(), 0), QMat::identity());
  EXPECT_EQ(mat_pow(F1(), 3), M({{1, 0, 3}, {0, 1, 0}, {0, 0, 1}}));
}

TEST(MatPow, FibonacciClosedForm) {
  QMat f = f1_of(parse_triple("e,e,13"));
  for (long k = 0; k <= 40; ++k) {
    QMat expect;
    expect(0, 0) = Rational(fib(k));
    expect(0, 2) = Rational(fib(k - 1));
    expect(1, 1) = 1;
    expect(2, 0) = Rational(fib(k - 1));
    expect(2, 2) = Rational(fib(k - 2));
    EXPECT_EQ(mat_pow(f, k), expect) << "k=" << k;
  }
}

TEST(MatPow, AdditiveExponents) {
  std::set<std::string> seen;
  for (auto& t : all_triples()) {
    QMat f = f1_of(t);
    std::ostringstream key;
    for (int i = 0; i < 9; ++i) key << f(i / 3, i % 3) << ' ';
    if (!seen.insert(key.str()).second) continue;
    for (int a = 0; a <= 10; ++a)
      for (int b = 0; b <= 10; ++b) ASSERT_EQ(mat_pow(f, a + b), mat_pow(f, a) * mat_pow(f, b));
  }
  EXPECT_EQ(seen.size(), 36u);
}

TEST(Triple, ParseAndEnumerate) {
  auto all = all_triples();
  std::set<int> idx;
  for (auto& t : all) {
    idx.insert(t.index());
    EXPECT_EQ(parse_triple(to_string(t)), t);
  }
  EXPECT_EQ(idx.size(), 216u);
  EXPECT_EQ(parse_triple("(23),(23),(23)"), (PermTriple{S3::p23, S3::p23, S3::p23}));
  EXPECT_THROW(parse_triple("e,e"), ParseError);
  EXPECT_THROW(parse_triple("e,e,e,e"), ParseError);
}

TEST(CharPoly, Examples) {
  EXPECT_EQ(char_poly(QMat::identity()), cubic(-1, 3, -3));
  EXPECT_EQ(to_string(char_poly(QMat::identity())), "t^3-3*t^2+3*t-1");
  // (t-1)(t^2-t-1) = t^3 - 2t^2 + 1
  EXPECT_EQ(char_poly(f1_of(parse_triple("e,e,13")).transpose()), cubic(1, 0, -2));
  EXPECT_EQ(char_poly(f1_of(parse_triple("e,e,e")).transpose()), cubic(-1, 3, -3));
}

TEST(CharPoly, UnitConstantTerm) {
  for (auto& t : all_triples()) {
    CubicPoly p = char_poly(f1_of(t));
    EXPECT_EQ(abs(p.c[0]), 1);
    EXPECT_EQ(p.c[3], 1);
  }
}
