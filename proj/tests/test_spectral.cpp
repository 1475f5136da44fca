#include <gtest/gtest.h>

#include <map>
#include <set>

#include "trip/core.hpp"
#include "trip/spectral.hpp"
#include "trip/tables.hpp"

using namespace trip;

TEST(Classify, Examples) {
  EXPECT_EQ(behavior(parse_triple("e,e,e")), Behavior::Polynomial);
  EXPECT_EQ(behavior(parse_triple("e,e,13")), Behavior::NonPolynomial);
  EXPECT_EQ(behavior(parse_triple("12,12,12")), Behavior::Polynomial);
  EXPECT_EQ(behavior(parse_triple("23,23,23")), Behavior::Polynomial);
  EXPECT_EQ(jordan_class(parse_triple("e,e,13")), JordanClass::J4);
  EXPECT_EQ(jordan_class(parse_triple("e,e,e")), JordanClass::J1);
}

TEST(Classify, LiteralJordanDisplays) {
  // I + E_01 is the J1 display, I + E_12 the J3 display
  EXPECT_EQ(jordan_class_of(QMat::from({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}})), JordanClass::J1);
  EXPECT_EQ(jordan_class_of(QMat::from({{1, 0, 0}, {0, 1, 1}, {0, 0, 1}})), JordanClass::J3);
  EXPECT_THROW(jordan_class_of(QMat::identity()), UnrecognizedClass);
  EXPECT_THROW(jordan_class_of(QMat::from({{2, 0, 0}, {0, 1, 0}, {0, 0, 1}})), UnrecognizedClass);
}

TEST(Classify, JordanPowersMatchDisplayedStructure) {
  // (J1)^k = I + k E_01 and (J3)^k = I + k E_12: the J-class of A^k is stable for k >= 1
  for (auto& t : all_triples()) {
    JordanClass j = jordan_class(t);
    if (j != JordanClass::J1 && j != JordanClass::J3) continue;
    QMat A = f1_of(t).transpose();
    for (int k = 1; k <= 4; ++k) EXPECT_EQ(jordan_class_of(mat_pow(A, k)), j) << t;
  }
}

TEST(Census, Split) {
  auto c = census();
  EXPECT_EQ(c[Behavior::Polynomial], 108);
  EXPECT_EQ(c[Behavior::NonPolynomial], 108);
}

TEST(Census, MapTableRowsArePolynomial) {
  for (auto& t : load_table("appendix_a").triples()) EXPECT_EQ(behavior(t), Behavior::Polynomial) << t;
}

TEST(Census, AllSixClassesOccur) {
  std::map<JordanClass, std::set<std::pair<S3, S3>>> pairs;
  for (auto& t : all_triples()) pairs[jordan_class(t)].insert({t.sigma, t.tau1});
  EXPECT_EQ(pairs.size(), 6u);
  std::size_t total = 0;
  for (auto& [j, s] : pairs) total += s.size();
  EXPECT_EQ(total, 36u);
  EXPECT_EQ(pairs[JordanClass::J3].size(), 2u);
  EXPECT_EQ(pairs[JordanClass::J1].size(), 4u);
  EXPECT_TRUE(pairs[JordanClass::J3].count({S3::p12, S3::p12}));
  EXPECT_TRUE(pairs[JordanClass::J3].count({S3::p123, S3::p132}));
}

TEST(Classify, PolynomialIffNotDiagonalizable) {
  for (auto& t : all_triples())
    EXPECT_EQ(behavior(t) == Behavior::Polynomial, !diagonalizable(f1_of(t))) << t;
}

TEST(Classify, IndependentOfTau0) {
  for (auto& t : all_triples())
    for (S3 g : all_s3) EXPECT_EQ(behavior(t), behavior(PermTriple{t.sigma, g, t.tau1}));
}

TEST(Classify, ConjugationInvariance) {
  for (auto& t : all_triples())
    for (S3 rho : all_s3)
      for (S3 gamma : all_s3) ASSERT_EQ(conjugation_invariance(t, rho, gamma), behavior(t)) << t;
  EXPECT_EQ(conjugation_invariance(parse_triple("e,e,e"), S3::p12, S3::p13), Behavior::Polynomial);
}

TEST(Classify, CombinationIndices) {
  std::vector<PermTriple> s{parse_triple("e,e,e"), parse_triple("e,e,13")};
  EXPECT_EQ(combo_behavior(s, 1), Behavior::Polynomial);
  EXPECT_EQ(combo_behavior(s, 2), Behavior::NonPolynomial);
  EXPECT_EQ(combo_behavior({parse_triple("23,23,23")}, 1), behavior(parse_triple("23,23,23")));
  EXPECT_THROW(combo_behavior(s, 3), DomainError);
}

TEST(Classify, BranchDenominatorLinearOnParityClasses) {
  QPoint q{Rational(3, 5), Rational(1, 7)};
  for (auto& t : all_triples()) {
    TripMap m(t);
    auto d = [&](long k) { return (m.branch_matrix(k) * homogeneous(q))[0]; };
    bool linear = true;
    for (long k = 0; k <= 6; ++k)
      if (d(k + 4) - 2 * d(k + 2) + d(k) != 0) linear = false;
    EXPECT_EQ(linear, behavior(t) == Behavior::Polynomial) << t;
  }
}
