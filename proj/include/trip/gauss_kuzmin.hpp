#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "core.hpp"
#include "quadrature.hpp"
#include "special.hpp"
#include "tables.hpp"

namespace trip {

struct OrbitTerminated : DomainError {
  OrbitTerminated(const std::string& what, long step) : DomainError(what), step(step) {}
  long step;
};

inline std::optional<Expr> density(const PermTriple& t) {
  if (const Expr* e = load_table("densities").find(t, "density")) return *e;
  return std::nullopt;
}

inline Expr require_density(const PermTriple& t) {
  auto d = density(t);
  if (!d) throw RowMissing("no invariant density tabulated for " + to_string(t));
  return *d;
}

inline std::array<DPoint, 3> subtriangle_vertices(const PermTriple& t, long k) {
  auto v = TripMap(t).vertices(k);
  return {to_double(v[0]), to_double(v[1]), to_double(v[2])};
}

inline QuadResult integrate_density(const Expr& r, const std::array<DPoint, 3>& tri, double tol) {
  return integrate_triangle([&](double x, double y) { return r(x, y); }, tri, tol);
}

/// mu(Delta_k) for the tabulated invariant density.
inline QuadResult pk_integral(const PermTriple& t, long k, double quad_tol = 1e-10) {
  Expr r = require_density(t);
  QuadResult q = integrate_density(r, subtriangle_vertices(t, k), quad_tol * 1e-2);
  if (!(q.error <= quad_tol))
    throw QuadratureFailure("p(" + std::to_string(k) + ") error estimate " + std::to_string(q.error) +
                            " above " + std::to_string(quad_tol));
  return q;
}

/// Integral of the density over the whole triangle.
inline QuadResult density_mass(const PermTriple& t, double tol = 1e-12) {
  return integrate_density(require_density(t), {DPoint{0, 0}, DPoint{1, 0}, DPoint{1, 1}}, tol);
}

enum class DilogReading { KPlusOne, LiteralK };

/// Dilogarithm closed form of p(k) for (e,e,e). For k > 0 the first dilog argument is
/// 1/(k+1)^2 (KPlusOne) or 1/k^2 (LiteralK).
inline double pk_closed_form_eee(long k, DilogReading reading = DilogReading::KPlusOne) {
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  if (k < 0) throw DomainError("k must be >= 0");
  if (k == 0) {
    double l2 = std::numbers::ln2;
    return 1 - (6 * dilog(0.25) + 12 * l2 * l2) / pi2;
  }
  double kd = static_cast<double>(k);
  double k1 = reading == DilogReading::KPlusOne ? kd + 1 : kd;
  double lk1 = std::log(kd + 1), lr = std::log((kd + 2) / (kd + 1));
  return 6 / pi2 *
         (dilog(1 / (k1 * k1)) - dilog(1 / ((kd + 2) * (kd + 2))) + 4 * lk1 * lk1 - 2 * lr * lr -
          2 * std::log(kd * (kd + 2)) * lk1);
}

/// p(k) for (e,23,e) as the two iterated integrals over x-slices of Delta_k.
inline double pk_iterated_e23e(long k, double tol = 1e-12) {
  constexpr double c = 6 / (std::numbers::pi * std::numbers::pi);
  auto r = [](double x, double y) { return c / (x * (1 - y)); };
  auto slice = [&](double x, double lo, double hi) {
    return integrate([&](double y) { return r(x, y); }, lo, hi, tol).value;
  };
  if (k == 0) return integrate([&](double x) { return slice(x, 1 - x, x); }, 0.5, 1.0, tol).value;
  double kd = static_cast<double>(k);
  double a = integrate([&](double x) { return slice(x, (1 - x) / (kd + 1), x); }, 1 / (kd + 2), 1 / (kd + 1), tol).value;
  double b = integrate([&](double x) { return slice(x, (1 - x) / (kd + 1), (1 - x) / kd); }, 1 / (kd + 1), 1.0, tol).value;
  return a + b;
}

struct FrequencyRecord {
  PermTriple triple;
  std::map<long, long> counts;  // digit -> count
  long n = 0;
  long terminated = 0;
  long burn_in = 0;
  std::uint64_t seed = 0;
  DPoint start{};

  double frequency(long k) const {
    if (n == 0) return 0;
    auto it = counts.find(k);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
  }
  /// Counts add; n and terminated add. Start and seed are kept from *this.
  FrequencyRecord& merge(const FrequencyRecord& o) {
    for (auto [k, c] : o.counts) counts[k] += c;
    n += o.n;
    terminated += o.terminated;
    return *this;
  }
};

/// Uniform point of the triangle 0 <= y <= x <= 1.
inline DPoint random_point(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(rng), b = u(rng);
  return {std::max(a, b), std::min(a, b)};
}

/// Digit tallies of n float steps after burn_in.
inline FrequencyRecord orbit_frequencies(const PermTriple& t, std::optional<DPoint> start, long n,
                                         long burn_in = 1000, std::uint64_t seed = 1,
                                         long k_max = 1000000000000000L) {
  if (n < 0 || burn_in < 0) throw DomainError("n and burn_in must be >= 0");
  FloatMap fm(t);
  FrequencyRecord rec;
  rec.triple = t;
  rec.burn_in = burn_in;
  rec.seed = seed;
  rec.start = start ? *start : random_point(seed);
  DPoint p = rec.start;
  for (long i = 0; i < burn_in + n; ++i) {
    DigitResult d = fm.digit(p, k_max);
    if (d.status != DigitStatus::Digit) {
      const char* why = d.status == DigitStatus::Terminated      ? "orbit hit the terminating set"
                        : d.status == DigitStatus::OutsideDomain ? "orbit left the triangle"
                                                                 : "digit above k_max";
      throw OrbitTerminated(std::string(why) + " at step " + std::to_string(i), i);
    }
    if (i >= burn_in) {
      ++rec.counts[d.k];
      ++rec.n;
    }
    p = fm.apply(d.k, p);
    // rounding can push the image a few ulps past an edge of the closed triangle
    p.x = std::clamp(p.x, 0.0, 1.0);
    p.y = std::clamp(p.y, 0.0, p.x);
  }
  return rec;
}

struct CompareRow {
  long k = 0;
  double p_integral = 0;
  double quad_error = 0;
  double p_orbit = 0;
  double abs_diff = 0;
  double sigma = 0;
  bool pass = false;
};

/// Quadrature vs orbit frequencies; pass iff |diff| <= 3 sqrt(p(1-p)/n) + quadrature error.
inline std::vector<CompareRow> compare(const PermTriple& t, long k_max, long n, double quad_tol = 1e-10,
                                       long burn_in = 1000, std::uint64_t seed = 1,
                                       std::optional<DPoint> start = std::nullopt) {
  FrequencyRecord rec = orbit_frequencies(t, start, n, burn_in, seed);
  std::vector<CompareRow> rows;
  for (long k = 0; k <= k_max; ++k) {
    QuadResult q = pk_integral(t, k, quad_tol);
    CompareRow r;
    r.k = k;
    r.p_integral = q.value;
    r.quad_error = q.error;
    r.p_orbit = rec.frequency(k);
    r.abs_diff = std::fabs(r.p_orbit - r.p_integral);
    r.sigma = n > 0 ? std::sqrt(q.value * (1 - q.value) / static_cast<double>(n)) : INFINITY;
    r.pass = r.abs_diff <= 3 * r.sigma + q.error;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace trip
