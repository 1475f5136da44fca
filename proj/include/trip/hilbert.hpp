#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "quadrature.hpp"
#include "special.hpp"
#include "tables.hpp"
#include "transfer.hpp"

namespace trip {

/// phi(x, s) on the triangle times [0, inf).
struct RadialFunction {
  std::string name;
  std::function<double(const DPoint&, double)> phi;
  double decay = 1;  // phi = O(e^{-decay s})
};

inline RadialFunction radial_exp() {
  return {"exp", [](const DPoint&, double s) { return std::exp(-s); }, 1};
}
inline RadialFunction radial_gauss() {
  return {"gauss", [](const DPoint&, double s) { return std::exp(-s * s); }, INFINITY};
}
inline RadialFunction radial_zero() {
  return {"zero", [](const DPoint&, double) { return 0.0; }, INFINITY};
}
inline RadialFunction radial_by_name(const std::string& n) {
  if (n == "exp") return radial_exp();
  if (n == "gauss") return radial_gauss();
  if (n == "zero") return radial_zero();
  throw DomainError("unknown radial function '" + n + "' (expected exp, gauss or zero)");
}

struct LJHRow {
  PermTriple triple;
  Expr l, j, h;
};

inline std::optional<LJHRow> ljh_row(const PermTriple& t) {
  const Table& tb = load_table("ljh");
  const Expr* l = tb.find(t, "l");
  if (!l) return std::nullopt;
  return LJHRow{t, *l, tb.at(t, "j"), tb.at(t, "h")};
}

inline LJHRow require_ljh(const PermTriple& t) {
  auto r = ljh_row(t);
  if (!r) throw RowMissing("no l, j, h row for " + to_string(t) + " (36 triples are tabulated)");
  return *r;
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// int_0^inf J1(2 sqrt(st))/sqrt(st) * t/(e^t - 1) * phi(x,s) dm(s)
inline double kernel_K(const RadialFunction& phi, const DPoint& x, double t, double tol = 1e-12) {
  double wt = dm_weight(t);
  auto f = [&](double s) { return bessel_kernel(s * t) * phi.phi(x, s) * dm_weight(s); };
  return wt * integrate(f, 0.0, kInf, tol).value;
}

/// Same kernel with ds in place of dm(s).
inline double kernel_K_ds(const RadialFunction& phi, const DPoint& x, double t, double tol = 1e-12) {
  double wt = dm_weight(t);
  auto f = [&](double s) { return bessel_kernel(s * t) * phi.phi(x, s); };
  return wt * integrate(f, 0.0, kInf, tol).value;
}

/// j(q) int_0^inf e^{-s h(q)} phi(q,s) dm(s)
inline double phi_hat(const RadialFunction& phi, const LJHRow& row, const DPoint& q, double tol = 1e-12) {
  double h = row.h(q.x, q.y);
  if (!(h > 0)) throw DomainError("h <= 0 at the evaluation point");
  auto f = [&](double s) { return std::exp(-s * h) * phi.phi(q, s) * dm_weight(s); };
  return row.j(q.x, q.y) * integrate(f, 0.0, kInf, tol).value;
}

/// P(q) = w_k(q) j(a_k,b_k) (k + l(q))^2, independent of k.
inline double ljh_prefactor(const LJHRow& row, const DPoint& q, long k = 0) {
  FloatMap fm(row.triple);
  auto b = fm.branch(k, q);
  double kl = static_cast<double>(k) + row.l(q.x, q.y);
  return b.weight * row.j(b.p.x, b.p.y) * kl * kl;
}

/// <phi, eta_n> against dm.
inline double eta_coefficient(const RadialFunction& phi, const DPoint& q, int n, double tol = 1e-12) {
  auto f = [&](double s) { return phi.phi(q, s) * eta_k(n, s) * dm_weight(s); };
  return integrate(f, 0.0, kInf, tol).value;
}

/// E_n(q) = P(q) int_0^inf e^{-t(l-1)} e_n(t) dm(t)
inline double E_n(const LJHRow& row, const DPoint& q, int n, double prefactor, double tol = 1e-12) {
  double l = row.l(q.x, q.y);
  auto f = [&](double t) { return std::exp(-t * (l - 1)) * laguerre_e(n, t) * dm_weight(t); };
  return prefactor * integrate(f, 0.0, kInf, tol).value;
}

struct Representation {
  double lhs = 0;           // L(phi_hat)(q)
  double lhs_error = 0;
  double rhs1 = 0;          // P int e^{-t(l-1)} K dt, K as displayed
  double rhs1_alt = 0;      // ds in place of dm(s) in K
  double rhs1_printed = 0;  // 1/h(q)^2 in place of P
  double rhs2 = 0;          // sum_n <phi, eta_n> E_n
  int terms = 0;
  double prefactor = 0;
  double r1() const { return std::fabs(lhs - rhs1); }
  double r1_alt() const { return std::fabs(lhs - rhs1_alt); }
  double r1_printed() const { return std::fabs(lhs - rhs1_printed); }
  double r2() const { return std::fabs(lhs - rhs2); }
};

struct RepresentationFailure : DomainError {
  using DomainError::DomainError;
};

inline Representation verify_representation(const PermTriple& t, const RadialFunction& phi, const DPoint& q,
                                             double tol = 1e-4, int max_terms = 400) {
  LJHRow row = require_ljh(t);
  Representation out;
  double qt = std::min(1e-10, tol * 1e-3);
  double l = row.l(q.x, q.y);
  if (!(l > 1)) throw DomainError("l <= 1 at the evaluation point; e^{-t(l-1)} does not decay");
  try {
    BranchSystem bs(t);
    SumResult s = bs.apply([&](double x, double y) { return phi_hat(phi, row, {x, y}, qt); }, q, tol * 1e-2);
    out.lhs = s.value;
    out.lhs_error = s.error;
  } catch (const DomainError& e) {
    throw RepresentationFailure(std::string("left side: ") + e.what());
  }
  try {
    out.prefactor = ljh_prefactor(row, q);
    auto outer = [&](auto kernel) {
      auto f = [&](double tt) { return std::exp(-tt * (l - 1)) * kernel(phi, q, tt, qt); };
      return integrate(f, 0.0, kInf, qt).value;
    };
    double I = outer([](auto&&... a) { return kernel_K(a...); });
    double Ialt = outer([](auto&&... a) { return kernel_K_ds(a...); });
    out.rhs1 = out.prefactor * I;
    out.rhs1_alt = out.prefactor * Ialt;
    double h = row.h(q.x, q.y);
    out.rhs1_printed = I / (h * h);
  } catch (const DomainError& e) {
    throw RepresentationFailure(std::string("integral side: ") + e.what());
  }
  try {
    CompensatedSum acc;
    int small = 0;
    for (int n = 0; n < max_terms; ++n) {
      double c = eta_coefficient(phi, q, n, qt);
      double term = c == 0 ? 0.0 : c * E_n(row, q, n, out.prefactor, qt);
      acc.add(term);
      out.terms = n + 1;
      small = std::fabs(term) < tol / 10 ? small + 1 : 0;
      if (small >= 3) break;
    }
    if (small < 3) throw NoConvergence("eta series did not settle within " + std::to_string(max_terms) + " terms");
    out.rhs2 = acc.value();
  } catch (const DomainError& e) {
    throw RepresentationFailure(std::string("series side: ") + e.what());
  }
  return out;
}

/// min of l over a grid; the representation needs l > 1.
inline double min_l(const PermTriple& t, const std::vector<DPoint>& grid) {
  LJHRow row = require_ljh(t);
  double m = kInf;
  for (auto& q : grid) m = std::min(m, row.l(q.x, q.y));
  return m;
}

}  // namespace trip
