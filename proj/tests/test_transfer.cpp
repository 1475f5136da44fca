#include <gtest/gtest.h>

#include <boost/math/special_functions/polygamma.hpp>
#include <random>
#include <set>

#include "trip/quadrature.hpp"
#include "trip/spectral.hpp"
#include "trip/transfer.hpp"

using namespace trip;

namespace {

const PermTriple eee = parse_triple("e,e,e");
const PermTriple ee13 = parse_triple("e,e,13");

// rows whose tabulated summand is not |g w_k / g(branch)|
const std::set<std::string> kSummandMismatch{"e,13,e",    "e,13,12",    "e,132,12",    "12,13,e",    "12,132,e",
                                             "12,132,12", "13,e,13",    "13,e,123",    "23,12,132",  "23,123,132",
                                             "123,12,23", "123,12,132", "132,e,13"};

double one(double, double) { return 1.0; }

}  // namespace

TEST(TransferApply, EeeConstantMatchesHurwitzZeta) {
  // sum_k 64/(5+2k)^3 = 8 zeta(3, 5/2) = -4 psi''(5/2)
  double oracle = -4 * boost::math::polygamma(2, 2.5);
  BranchSystem bs(eee);
  SumResult r = bs.apply(one, {0.5, 0.25}, 1e-12);
  EXPECT_NEAR(r.value, oracle, 1e-11);
  EXPECT_LE(std::fabs(r.value - oracle), r.error + 1e-14);
  EXPECT_NEAR(oracle, 0.9448162066, 1e-10);
}

TEST(TransferApply, ZeroFunction) {
  for (auto& t : {eee, ee13}) {
    SumResult r = BranchSystem(t).apply([](double, double) { return 0.0; }, {0.4, 0.1}, 1e-10);
    EXPECT_EQ(r.value, 0.0);
  }
}

TEST(TransferApply, EigenfunctionIsFixed) {
  auto h = *eigenfunction(eee);
  DPoint q{0.5, 0.25};
  SumResult r = BranchSystem(eee).apply([&](double x, double y) { return h(x, y); }, q, 1e-12);
  EXPECT_NEAR(r.value, h(q.x, q.y), 1e-10);
}

TEST(TransferApply, PoliciesAgreeWithBruteForce) {
  DPoint q{0.7, 0.3};
  auto f = [](double x, double y) { return 1 + x * y; };
  for (auto& t : {eee, parse_triple("23,23,23"), parse_triple("12,12,12")}) {
    BranchSystem fixed(t, 2000000, TailPolicy::Fixed);
    double brute = fixed.apply(f, q, 0).value;
    // remaining tail after 2e6 terms is below 1e-12 for 1/k^3 weights
    for (TailPolicy p : {TailPolicy::EulerMaclaurin, TailPolicy::AnalyticCubic}) {
      SumResult r = BranchSystem(t, 1000000, p).apply(f, q, 1e-9);
      EXPECT_NEAR(r.value, brute, 1e-9 + 1e-11) << t << " " << to_string(p);
      EXPECT_LE(std::fabs(r.value - brute), r.error + 1e-11) << t << " " << to_string(p);
    }
  }
  for (auto& t : {ee13, parse_triple("e,e,23"), parse_triple("12,e,e")}) {
    if (behavior(t) != Behavior::NonPolynomial) continue;
    BranchSystem fixed(t, 200, TailPolicy::Fixed);
    double brute = fixed.apply(f, q, 0).value;
    SumResult r = BranchSystem(t).apply(f, q, 1e-12);
    EXPECT_EQ(r.policy, TailPolicy::GeometricRatio);
    EXPECT_NEAR(r.value, brute, 1e-12) << t;
  }
}

TEST(TransferApply, NoConvergenceWhenCapTooSmall) {
  BranchSystem bs(eee, 64, TailPolicy::AnalyticCubic);
  EXPECT_THROW(bs.apply(one, {0.5, 0.25}, 1e-14), NoConvergence);
}

TEST(OperatorTable, TermwiseAgreementFloat) {
  const Table& tb = load_table("appendix_b");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (auto& t : tb.triples()) {
    auto form = *appendix_b_form(t);
    FloatMap fm(t);
    for (int i = 0; i < 10; ++i) {
      double a = u(rng), b = u(rng);
      DPoint q{std::max(a, b), std::min(a, b)};
      for (long k = 0; k <= 50; ++k) {
        auto br = fm.branch(k, q);
        double w = std::fabs(form.weight(q.x, q.y, k));
        ASSERT_NEAR(br.weight, w, 1e-12 * w) << t << " k=" << k;
        ASSERT_NEAR(br.p.x, form.branch_x(q.x, q.y, k), 1e-12) << t << " k=" << k;
        ASSERT_NEAR(br.p.y, form.branch_y(q.x, q.y, k), 1e-12) << t << " k=" << k;
      }
    }
  }
}

TEST(OperatorTable, TermwiseAgreementExact) {
  const Table& tb = load_table("appendix_b");
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> d(1, 999);
  for (auto& t : tb.triples()) {
    auto form = *appendix_b_form(t);
    TripMap m(t);
    for (int i = 0; i < 10; ++i) {
      Rational a(d(rng), 1000), b(d(rng), 1000);
      if (a == b) continue;
      QPoint q{std::max(a, b), std::min(a, b)};
      for (long k : {0L, 1L, 2L, 5L}) {
        QPoint p = m.inverse_branch(k, q);
        Rational w = form.weight.exact(q.x, q.y, k);
        ASSERT_EQ(m.jacobian_recip(k, q), w < 0 ? Rational(-w) : w) << t;
        ASSERT_EQ(p.x, form.branch_x.exact(q.x, q.y, k)) << t;
        ASSERT_EQ(p.y, form.branch_y.exact(q.x, q.y, k)) << t;
      }
    }
  }
}

TEST(OperatorTable, OnlyPolynomialRows) {
  for (auto& t : all_triples()) EXPECT_EQ(appendix_b_form(t).has_value(), behavior(t) == Behavior::Polynomial) << t;
  EXPECT_FALSE(appendix_b_form(ee13).has_value());
  auto f = *appendix_b_form(parse_triple("23,23,23"));
  EXPECT_EQ(f.weight, Expr("1/(k*x+x-y+1)^3"));
}

TEST(Tables, EigenfunctionAndBanachLookups) {
  EXPECT_EQ(*eigenfunction(parse_triple("e,23,e")), Expr("1/(x*(1-y))"));
  EXPECT_EQ(*eigenfunction(parse_triple("13,13,13")), Expr("1/((x-2)*(1-y))"));
  EXPECT_FALSE(eigenfunction(ee13).has_value());
  EXPECT_EQ(*banach_weight(eee), Expr("x"));
  EXPECT_EQ(*summand_form(eee), Expr("x/(k*x+y+1)^2"));
  EXPECT_EQ(*summand_form(parse_triple("23,23,23")), Expr("x/(k*x+x-y+1)^2"));
  EXPECT_EQ(*banach_weight(parse_triple("12,132,e")), Expr("x*(y-1)"));
  EXPECT_EQ(*summand_form(parse_triple("12,132,e")), Expr("-((x*abs(y-1))/((y*k-k-x)*(y*k-k-x+y-1)^2))"));
}

TEST(Banach, TabulatedSummandMatchesGeneric) {
  const Table& tb = load_table("banach");
  std::set<std::string> mismatched;
  for (auto& t : tb.triples()) {
    Summand gen = generic_banach_summand(t), tab = tabulated_banach_summand(t);
    bool agree = true;
    for (const DPoint& q : interior_grid(4))
      for (long k = 0; k <= 50; ++k) {
        double a = std::fabs(gen(q, k)), b = std::fabs(tab(q, k));
        if (std::fabs(a - b) > 1e-12 * a) agree = false;
      }
    if (!agree) mismatched.insert(to_string(t));
  }
  EXPECT_EQ(mismatched, kSummandMismatch);
}

TEST(Banach, BoundedOnSmallGrid) {
  for (auto& t : load_table("banach").triples()) {
    auto c = check_banach_bound(t, 5, 2000);
    EXPECT_TRUE(c.bounded) << t << " ratio " << c.ratio_at_100;
    auto g = check_banach_bound(t, 5, 2000, SummandSource::Generic);
    EXPECT_TRUE(g.bounded) << t;
  }
}

TEST(Banach, EeeSupBoundedByZeta2) {
  // x/(kx+y+1)^2 <= x/(kx+1)^2, whose sum is at most x + sum 1/(k^2 x) ... bounded by 1 + pi^2/6 / x
  auto c = check_banach_bound(eee, 15, 10000);
  EXPECT_TRUE(c.bounded);
  EXPECT_LT(c.max_at_cap, 1 + std::numbers::pi * std::numbers::pi / 6);
}

TEST(Banach, DivergenceSuspected) {
  EXPECT_THROW(banach_partial_sums([](const DPoint&, long) { return 1.0; }, 3, 10000, 100.0), DivergenceSuspected);
  auto c = banach_partial_sums([](const DPoint&, long k) { return std::pow(k + 1.0, -1.5); }, 3, 10000, 1e6);
  EXPECT_TRUE(c.sublog_growth);
  EXPECT_TRUE(c.bounded);
}

TEST(Grid, MarginAndCount) {
  for (int n : {1, 5, 15}) {
    auto g = interior_grid(n);
    EXPECT_EQ(g.size(), static_cast<std::size_t>(n * n));
    double d = 1.0 / (n + 2);
    for (auto& q : g) {
      EXPECT_GE(q.y, d - 1e-15);
      EXPECT_GE(q.x - q.y, d - 1e-15);
      EXPECT_GE(1 - q.x, d - 1e-15);
    }
  }
}

TEST(Eigen, SelectedRowsSmallGrid) {
  for (const char* s : {"e,e,e", "13,13,13", "12,13,12", "132,123,123"}) {
    auto c = check_eigen(parse_triple(s), 5, 1e-6);
    EXPECT_TRUE(c.pass) << s << " residual " << c.max_residual;
  }
}

TEST(Eigen, PerturbedFunctionFails) {
  auto c = check_eigen(eee, 5, 1e-6, 0.1);
  EXPECT_GT(c.max_residual, 1e-3);
  EXPECT_FALSE(c.pass);
}

TEST(Eigen, MissingRow) { EXPECT_THROW(check_eigen(ee13, 3, 1e-6), RowMissing); }

TEST(Monotonicity, ConstantsAndEigenfunction) {
  std::vector<DPoint> grid{{0.5, 0.25}, {0.8, 0.1}, {0.3, 0.2}};
  auto r = check_positivity_monotonicity(eee, [](double, double) { return 0.0; }, one, 1, grid);
  EXPECT_TRUE(r.holds);
  auto h = *eigenfunction(eee);
  auto hp = [&](double x, double y) { return h(x, y); };
  auto hm = [&](double x, double y) { return -h(x, y); };
  auto r2 = check_positivity_monotonicity(eee, hm, hp, 2, grid, 1e-6);
  EXPECT_TRUE(r2.holds);
  auto r3 = check_positivity_monotonicity(eee, [](double, double) { return 0.0; }, one, 3, {{0.5, 0.25}}, 1e-5);
  EXPECT_TRUE(r3.holds);
}

TEST(Monotonicity, PreconditionRejected) {
  std::vector<DPoint> grid{{0.5, 0.25}};
  EXPECT_THROW(check_positivity_monotonicity(eee, one, one, 1, grid), DomainError);
}

TEST(Monotonicity, BoundedByEigenfunction) {
  auto h = *eigenfunction(eee);
  // |f| <= h on the triangle since h >= 1/2 there
  auto f = [](double x, double y) { return 0.5 * std::sin(7 * x + 3 * y); };
  BranchSystem bs(eee);
  for (const DPoint& q : interior_grid(3))
    for (int n = 1; n <= 2; ++n) {
      SumResult r = transfer_power(bs, f, n, q, 1e-8);
      EXPECT_LE(std::fabs(r.value), h(q.x, q.y) + r.error) << n;
    }
}

TEST(Monotonicity, OrderPreservedOnGrid) {
  auto f = [](double x, double y) { return x * y; };
  auto g = [](double x, double y) { return x * y + 0.01 * x; };
  BranchSystem bs(parse_triple("23,23,23"));
  for (const DPoint& q : interior_grid(4)) EXPECT_LT(bs.apply(f, q, 1e-12).value, bs.apply(g, q, 1e-12).value);
}

TEST(MassConservation, IntegralOfL1IsAreaOfPartition) {
  // int_Delta L1 = sum_k area(Delta_k) = 1/2 when the partition covers the triangle
  BranchSystem bs(eee);
  auto L1 = [&](double x, double y) { return bs.apply(one, {x, y}, 1e-10).value; };
  QuadResult r = integrate_triangle(L1, {DPoint{0, 0}, DPoint{1, 0}, DPoint{1, 1}}, 1e-7);
  EXPECT_NEAR(r.value, 0.5, 1e-6);
}
