#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "core.hpp"
#include "quadrature.hpp"
#include "tables.hpp"

namespace trip {

struct NoConvergence : DomainError {
  using DomainError::DomainError;
};
struct DivergenceSuspected : DomainError {
  using DomainError::DomainError;
};

enum class TailPolicy { Auto, EulerMaclaurin, AnalyticCubic, GeometricRatio, Fixed };

inline const char* to_string(TailPolicy p) {
  switch (p) {
    case TailPolicy::Auto: return "auto";
    case TailPolicy::EulerMaclaurin: return "euler-maclaurin";
    case TailPolicy::AnalyticCubic: return "analytic-cubic";
    case TailPolicy::GeometricRatio: return "geometric-ratio";
    case TailPolicy::Fixed: return "fixed";
  }
  return "";
}

struct SumResult {
  double value = 0;
  double error = 0;  // NaN when uncertified (Fixed policy)
  long terms = 0;
  TailPolicy policy = TailPolicy::Auto;
};

/// Neumaier compensated sum.
struct CompensatedSum {
  double s = 0, c = 0;
  void add(double v) {
    double t = s + v;
    c += std::fabs(s) >= std::fabs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

/// Inverse branches and weights of one map, with certified truncation of the transfer sum.
class BranchSystem {
 public:
  explicit BranchSystem(PermTriple t, long k_max = 1000000, TailPolicy policy = TailPolicy::Auto)
      : map_(t), k_max_(k_max), policy_(policy) {}

  const FloatMap& map() const { return map_; }
  const PermTriple& triple() const { return map_.triple(); }
  long k_max() const { return k_max_; }

  TailPolicy effective_policy() const {
    if (policy_ != TailPolicy::Auto) return policy_;
    return map_.parity_affine() ? TailPolicy::EulerMaclaurin : TailPolicy::GeometricRatio;
  }

  FloatMap::Branch branch(long k, const DPoint& q) const { return map_.branch(k, q); }

  /// Sum over k of weight(k,q) f(branch(k,q)) with |error| <= tol.
  template <class F>
  SumResult apply(const F& f, const DPoint& q, double tol) const {
    switch (effective_policy()) {
      case TailPolicy::EulerMaclaurin: return apply_em(f, q, tol);
      case TailPolicy::AnalyticCubic: return apply_cubic(f, q, tol);
      case TailPolicy::GeometricRatio: return apply_geometric(f, q, tol);
      default: return apply_fixed(f, q);
    }
  }

  template <class F>
  double term(const F& f, long k, const DPoint& q) const {
    auto b = map_.branch(k, q);
    return b.weight * f(b.p.x, b.p.y);
  }

 private:
  FloatMap map_;
  long k_max_;
  TailPolicy policy_;

  template <class F>
  double term_real(const F& f, double m, int r, const DPoint& q) const {
    auto b = FloatMap::branch_from(map_.branch_matrix_real(m, r), q);
    return b.weight * f(b.p.x, b.p.y);
  }

  // Direct sum below k = 2M, then on each parity class
  //   sum_{m >= M} s(m) = int_M^inf s + s(M)/2 - s'(M)/12 + s'''(M)/720 - ...
  // with |s'''(M)|/720 kept as the error bound.
  template <class F>
  SumResult apply_em(const F& f, const DPoint& q, double tol) const {
    if (!map_.parity_affine()) throw DomainError("Euler-Maclaurin tail needs a parity-affine map");
    CompensatedSum direct;
    long k = 0, M = 32;
    for (;;) {
      for (; k < 2 * M; ++k) direct.add(term(f, k, q));
      double tail = 0, err = 0;
      for (int r = 0; r < 2; ++r) {
        auto s = [&](double m) { return term_real(f, m, r, q); };
        double m0 = static_cast<double>(M), s0 = s(m0);
        auto derivs = [&](double h) {
          double sm2 = s(m0 - 2 * h), sm1 = s(m0 - h), sp1 = s(m0 + h), sp2 = s(m0 + 2 * h);
          return std::pair{(sm2 - 8 * sm1 + 8 * sp1 - sp2) / (12 * h), (sp2 - 2 * sp1 + 2 * sm1 - sm2) / (2 * h * h * h)};
        };
        auto [d1c, d3c] = derivs(m0 / 32);
        auto [d1, d3] = derivs(m0 / 64);
        QuadResult I = integrate_tail(s, m0, 1e-13);
        tail += I.value + s0 / 2 - d1 / 12 + d3 / 720;
        err += std::fabs(d3) / 720 + std::fabs(d1 - d1c) / 12 + std::fabs(d3 - d3c) / 720 + I.error;
      }
      if (err <= tol || 2 * M >= k_max_) {
        if (err > tol)
          throw NoConvergence("tail bound " + std::to_string(err) + " above tolerance at k=" + std::to_string(k));
        return {direct.value() + tail, err, k, TailPolicy::EulerMaclaurin};
      }
      M *= 2;
    }
  }

  template <class F>
  SumResult apply_cubic(const F& f, const DPoint& q, double tol) const {
    CompensatedSum sum;
    long next = 16;
    for (long k = 0; k <= k_max_; ++k) {
      double t = term(f, k, q);
      sum.add(t);
      if (k == next) {
        double bound = std::fabs(t) * static_cast<double>(k);
        if (bound <= tol) return {sum.value(), bound, k + 1, TailPolicy::AnalyticCubic};
        next *= 2;
      }
    }
    throw NoConvergence("cubic tail bound above tolerance at k_max=" + std::to_string(k_max_));
  }

  template <class F>
  SumResult apply_geometric(const F& f, const DPoint& q, double tol) const {
    CompensatedSum sum;
    double prev = 0;
    int good = 0;
    double rmax = 0;
    for (long k = 0; k <= k_max_; ++k) {
      double t = term(f, k, q);
      sum.add(t);
      if (k > 0) {
        if (t == 0 && prev == 0) {
          if (++good >= 3) return {sum.value(), 0.0, k + 1, TailPolicy::GeometricRatio};
          continue;
        }
        double r = prev == 0 ? INFINITY : std::fabs(t / prev);
        if (r < 0.9) {
          rmax = good ? std::max(rmax, r) : r;
          ++good;
        } else {
          good = 0;
        }
        if (good >= 3) {
          double bound = 2 * std::fabs(t) * rmax / (1 - rmax);
          if (bound <= tol) return {sum.value(), bound, k + 1, TailPolicy::GeometricRatio};
        }
      }
      prev = t;
    }
    throw NoConvergence("geometric tail bound above tolerance at k_max=" + std::to_string(k_max_));
  }

  template <class F>
  SumResult apply_fixed(const F& f, const DPoint& q) const {
    CompensatedSum sum;
    for (long k = 0; k <= k_max_; ++k) sum.add(term(f, k, q));
    return {sum.value(), std::numeric_limits<double>::quiet_NaN(), k_max_ + 1, TailPolicy::Fixed};
  }
};

/// Cell-centred interior grid of n*n points, kept at distance >= 1/(n+2) from the boundary.
inline std::vector<DPoint> interior_grid(int n) {
  double d = 1.0 / (n + 2);
  std::vector<DPoint> g;
  for (int i = 0; i < n; ++i) {
    double x = 2 * d + (1 - 3 * d) * (i + 0.5) / n;
    for (int j = 0; j < n; ++j) g.push_back({x, d + (x - 2 * d) * (j + 0.5) / n});
  }
  return g;
}

// ---------------------------------------------------------------------------
// tabulated closed forms

struct OperatorForm {
  Expr weight, branch_x, branch_y;
};

inline std::optional<OperatorForm> appendix_b_form(const PermTriple& t) {
  const Table& tb = load_table("appendix_b");
  const Expr* w = tb.find(t, "weight");
  if (!w) return std::nullopt;
  return OperatorForm{*w, tb.at(t, "branch_x"), tb.at(t, "branch_y")};
}

struct MapForm {
  Expr x, y;
};

inline std::optional<MapForm> appendix_a_form(const PermTriple& t) {
  const Table& tb = load_table("appendix_a");
  const Expr* x = tb.find(t, "map_x");
  if (!x) return std::nullopt;
  return MapForm{*x, tb.at(t, "map_y")};
}

inline std::optional<Expr> eigenfunction(const PermTriple& t) {
  if (const Expr* e = load_table("eigenfunctions").find(t, "eigenfunction")) return *e;
  return std::nullopt;
}

inline std::optional<Expr> banach_weight(const PermTriple& t) {
  if (const Expr* e = load_table("banach").find(t, "g")) return *e;
  return std::nullopt;
}

inline std::optional<Expr> summand_form(const PermTriple& t) {
  if (const Expr* e = load_table("banach").find(t, "summand")) return *e;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// checks

struct EigenCheck {
  double max_residual = 0;
  DPoint worst{};
  double max_error_bound = 0;
  int points = 0;
  bool pass = false;
};

/// Max over the interior grid of |L h - h| / |h| for the tabulated eigenfunction h.
inline EigenCheck check_eigen(const PermTriple& t, int grid_n, double tol, double perturb = 0,
                              long k_max = 1000000) {
  auto h = eigenfunction(t);
  if (!h) throw RowMissing("no eigenfunction tabulated for " + to_string(t));
  BranchSystem bs(t, k_max);
  auto f = [&](double x, double y) { return (*h)(x, y) + perturb; };
  EigenCheck out;
  for (const DPoint& q : interior_grid(grid_n)) {
    double hq = f(q.x, q.y);
    SumResult s = bs.apply(f, q, 1e-2 * tol * std::fabs(hq));
    double res = std::fabs(s.value - hq) / std::fabs(hq);
    if (res >= out.max_residual) {
      out.max_residual = res;
      out.worst = q;
    }
    out.max_error_bound = std::max(out.max_error_bound, s.error / std::fabs(hq));
    ++out.points;
  }
  out.pass = out.max_residual + out.max_error_bound <= tol;
  return out;
}

enum class SummandSource { Table, Generic };

struct BanachCheck {
  double median_at_100 = 0, max_at_100 = 0;
  double median_at_cap = 0, max_at_cap = 0;
  double ratio_at_100 = 0, ratio_at_cap = 0;
  bool sublog_growth = true;  // increments over decades do not grow
  bool finite = true;
  bool bounded = false;
};

using Summand = std::function<double(const DPoint&, long)>;

/// Partial sums of |summand| over the interior grid up to k_cap. Throws DivergenceSuspected
/// when the largest sum passes ceiling while growing faster than logarithmically.
inline BanachCheck banach_partial_sums(const Summand& summand, int grid_n, long k_cap, double ceiling = 1e6) {
  long k100 = std::min<long>(100, k_cap);
  std::vector<double> s100, scap;
  BanachCheck out;
  for (const DPoint& q : interior_grid(grid_n)) {
    CompensatedSum s;
    double at100 = 0, dec1 = 0, dec2 = 0;
    for (long k = 0; k <= k_cap; ++k) {
      s.add(std::fabs(summand(q, k)));
      if (k == k100) at100 = s.value();
      if (k == k_cap / 100) dec2 = s.value();
      if (k == k_cap / 10) dec1 = s.value();
    }
    double v = s.value();
    if (!std::isfinite(v) || !std::isfinite(at100)) out.finite = false;
    if (k_cap >= 1000 && (v - dec1) > (dec1 - dec2) * (1 + 1e-12) + 1e-300) out.sublog_growth = false;
    s100.push_back(at100);
    scap.push_back(v);
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  out.median_at_100 = median(s100);
  out.median_at_cap = median(scap);
  out.max_at_100 = *std::max_element(s100.begin(), s100.end());
  out.max_at_cap = *std::max_element(scap.begin(), scap.end());
  out.ratio_at_100 = out.max_at_100 / out.median_at_100;
  out.ratio_at_cap = out.max_at_cap / out.median_at_cap;
  if (!out.sublog_growth && !(out.max_at_cap <= ceiling))
    throw DivergenceSuspected("partial sums reach " + std::to_string(out.max_at_cap) + " at k=" +
                              std::to_string(k_cap) + " and are still growing");
  out.bounded = out.finite && out.sublog_growth && out.ratio_at_100 <= 10 && out.ratio_at_cap <= 10;
  return out;
}

/// Generic summand g(q) w_k(q) / g(branch_k(q)) built from the weight g and the inverse branches.
inline Summand generic_banach_summand(const PermTriple& t) {
  auto g = banach_weight(t);
  if (!g) throw RowMissing("no Banach weight tabulated for " + to_string(t));
  auto fm = std::make_shared<FloatMap>(t);
  return [g = *g, fm](const DPoint& q, long k) {
    auto b = fm->branch(k, q);
    return g(q.x, q.y) * b.weight / g(b.p.x, b.p.y);
  };
}

inline Summand tabulated_banach_summand(const PermTriple& t) {
  auto e = summand_form(t);
  if (!e) throw RowMissing("no Banach summand tabulated for " + to_string(t));
  return [e = *e](const DPoint& q, long k) { return e(q.x, q.y, k); };
}

inline BanachCheck check_banach_bound(const PermTriple& t, int grid_n, long k_cap,
                                      SummandSource src = SummandSource::Table, double ceiling = 1e6) {
  Summand s = src == SummandSource::Table ? tabulated_banach_summand(t) : generic_banach_summand(t);
  return banach_partial_sums(s, grid_n, k_cap, ceiling);
}

/// L^n f at q by nested certified sums.
inline SumResult transfer_power(const BranchSystem& bs, const std::function<double(double, double)>& f, int n,
                                const DPoint& q, double tol) {
  if (n == 0) return {f(q.x, q.y), 0.0, 0, TailPolicy::Auto};
  double inner_err = 0;
  auto g = [&](double x, double y) {
    SumResult r = transfer_power(bs, f, n - 1, {x, y}, tol * 0.1);
    inner_err = std::max(inner_err, r.error);
    return r.value;
  };
  SumResult r = bs.apply(g, q, tol * 0.5);
  // branch weights of L sum to at most L1, which is bounded by a few units on the interior
  SumResult w = bs.apply([](double, double) { return 1.0; }, q, tol);
  r.error += inner_err * (w.value + w.error);
  return r;
}

struct MonotonicityCheck {
  bool holds = true;
  double min_gap = INFINITY;  // min over grid of (L^n g - L^n f) - error bounds
};

/// Verifies L^n f < L^n g on the grid, given f < g there.
inline MonotonicityCheck check_positivity_monotonicity(const PermTriple& t,
                                                       const std::function<double(double, double)>& f,
                                                       const std::function<double(double, double)>& g, int n,
                                                       const std::vector<DPoint>& grid, double tol = 1e-8) {
  for (const DPoint& q : grid)
    if (!(f(q.x, q.y) < g(q.x, q.y))) throw DomainError("precondition f < g fails on the grid");
  BranchSystem bs(t);
  MonotonicityCheck out;
  for (const DPoint& q : grid) {
    SumResult a = transfer_power(bs, f, n, q, tol), b = transfer_power(bs, g, n, q, tol);
    double gap = (b.value - a.value) - (a.error + b.error);
    out.min_gap = std::min(out.min_gap, gap);
    if (gap <= 0) out.holds = false;
  }
  return out;
}

}  // namespace trip
