#pragma once

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trip/trip.hpp"

namespace trip::cli {

using json = nlohmann::json;

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// Rounded to 10 significant digits so JSON output is stable.
inline json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(fmt(v));
}

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// "a..b" or "a"
inline std::pair<long, long> parse_range(const std::string& s) {
  auto dots = s.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      long v = std::stol(s, &used);
      if (used != s.size() || v < 0) throw std::invalid_argument(s);
      return {v, v};
    }
    long a = std::stol(s.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument(s);
    std::string rest = s.substr(dots + 2);
    long b = std::stol(rest, &used);
    if (used != rest.size() || a < 0 || b < a) throw std::invalid_argument(s);
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError("range '" + s + "' must be K or A..B with 0 <= A <= B");
  }
}

inline DPoint parse_dpoint(const std::string& s) { return to_double(parse_point(s)); }

inline std::vector<PermTriple> triples_from(bool all, const std::string& triple, const Table* only_rows = nullptr) {
  if (all) {
    if (only_rows) return only_rows->triples();
    auto a = all_triples();
    return {a.begin(), a.end()};
  }
  if (triple.empty()) throw UsageError("pass --triple S,T0,T1 or --all");
  return {parse_triple(triple)};
}

inline std::string csv_triple(const PermTriple& t) { return "\"" + to_string(t) + "\""; }

inline TailPolicy parse_policy(const std::string& s) {
  if (s == "auto") return TailPolicy::Auto;
  if (s == "euler-maclaurin") return TailPolicy::EulerMaclaurin;
  if (s == "analytic-cubic") return TailPolicy::AnalyticCubic;
  if (s == "geometric-ratio") return TailPolicy::GeometricRatio;
  if (s == "fixed") return TailPolicy::Fixed;
  throw UsageError("unknown tail policy '" + s + "'");
}

inline std::string table_file(const std::string& which) {
  static const std::vector<std::pair<std::string, std::string>> names{
      {"appendix-a", "appendix_a"}, {"appendix-b", "appendix_b"}, {"banach", "banach"},
      {"eigenfunctions", "eigenfunctions"}, {"densities", "densities"}, {"ljh", "ljh"}};
  for (auto& [k, v] : names)
    if (k == which) return v;
  throw UsageError("unknown table '" + which + "' (appendix-a, appendix-b, banach, eigenfunctions, densities, ljh)");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"TRIP maps: digits, classification, transfer operators and Gauss-Kuzmin statistics"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker cap (computations are single-threaded)")->check(CLI::PositiveNumber);

  // classify
  auto* classify = app.add_subcommand("classify", "polynomial / non-polynomial behavior and Jordan class");
  bool c_all = false;
  std::string c_triple, c_format = "csv";
  classify->add_flag("--all", c_all, "all 216 triples");
  classify->add_option("--triple", c_triple, "triple S,T0,T1");
  classify->add_option("--format", c_format)->check(CLI::IsMember({"csv", "json"}));

  // expand
  auto* expand_cmd = app.add_subcommand("expand", "digit sequence of a rational point");
  std::string e_triple, e_schedule, e_point;
  long e_steps = 20, e_kmax = kDefaultExactKMax;
  expand_cmd->add_option("--triple", e_triple);
  expand_cmd->add_option("--schedule", e_schedule, "t1;t2;... applied cyclically");
  expand_cmd->add_option("--point", e_point, "x,y as num/den or decimals")->required();
  expand_cmd->add_option("--steps", e_steps)->check(CLI::NonNegativeNumber);
  expand_cmd->add_option("--kmax", e_kmax)->check(CLI::PositiveNumber);

  // subtriangle
  auto* sub = app.add_subcommand("subtriangle", "vertices of Delta_k");
  std::string s_triple, s_point;
  long s_k = 0;
  sub->add_option("--triple", s_triple)->required();
  sub->add_option("--k", s_k)->required()->check(CLI::NonNegativeNumber);
  sub->add_option("--point", s_point, "also report barycentric coordinates of this point");

  // transfer
  auto* transfer = app.add_subcommand("transfer", "transfer operator evaluation and checks");
  transfer->require_subcommand(1);
  auto* t_eval = transfer->add_subcommand("eval", "(L f)(q) with certified truncation");
  auto* t_eigen = transfer->add_subcommand("check-eigen", "residual of L h = h on an interior grid");
  auto* t_banach = transfer->add_subcommand("check-banach", "boundedness of Banach-weight partial sums");
  std::string t_triple, t_point = "1/2,1/4", t_f = "one", t_policy = "auto", t_source = "table";
  bool t_all = false;
  double t_tol = 1e-6, t_perturb = 0, t_ratio = 10;
  int t_grid = 15;
  long t_kmax = 1000000;
  t_eval->add_option("--triple", t_triple)->required();
  t_eval->add_option("--point", t_point);
  t_eval->add_option("--f", t_f, "one, xy or eigen")->check(CLI::IsMember({"one", "xy", "eigen"}));
  t_eval->add_option("--tol", t_tol)->check(CLI::PositiveNumber);
  t_eval->add_option("--kmax", t_kmax)->check(CLI::PositiveNumber);
  t_eval->add_option("--policy", t_policy);
  for (auto* c : {t_eigen, t_banach}) {
    c->add_option("--triple", t_triple);
    c->add_flag("--all", t_all, "every tabulated triple");
    c->add_option("--grid", t_grid)->check(CLI::PositiveNumber);
    c->add_option("--kmax", t_kmax)->check(CLI::PositiveNumber);
  }
  t_eigen->add_option("--tol", t_tol)->check(CLI::PositiveNumber);
  t_eigen->add_option("--perturb", t_perturb, "constant added to h (negative control)");
  t_banach->add_option("--source", t_source)->check(CLI::IsMember({"table", "generic"}));
  t_banach->add_option("--ratio", t_ratio, "allowed max/median ratio")->check(CLI::PositiveNumber);

  // hilbert
  auto* hilbert = app.add_subcommand("hilbert", "integral representation of the transfer operator");
  hilbert->require_subcommand(1);
  auto* h_verify = hilbert->add_subcommand("verify", "both sides of the representation at a point");
  std::string h_triple, h_phi = "exp", h_point = "1/2,1/4";
  double h_tol = 1e-4;
  h_verify->add_option("--triple", h_triple)->required();
  h_verify->add_option("--phi", h_phi)->check(CLI::IsMember({"exp", "gauss", "zero"}));
  h_verify->add_option("--point", h_point);
  h_verify->add_option("--tol", h_tol)->check(CLI::PositiveNumber);

  // gk
  auto* gk = app.add_subcommand("gk", "Gauss-Kuzmin statistics");
  gk->require_subcommand(1);
  auto* g_pk = gk->add_subcommand("pk", "p(k) by quadrature of the invariant density");
  auto* g_orbit = gk->add_subcommand("orbit", "digit frequencies along a float orbit");
  auto* g_cmp = gk->add_subcommand("compare", "quadrature against orbit frequencies");
  std::string g_triple, g_k = "0", g_cmp_k = "0..5", g_start;
  double g_qtol = 1e-10;
  long g_iters = 1000000, g_burn = 1000, g_print = 10;
  std::uint64_t g_seed = 1;
  for (auto* c : {g_pk, g_orbit, g_cmp}) c->add_option("--triple", g_triple)->required();
  g_pk->add_option("--k", g_k, "K or A..B");
  g_cmp->add_option("--k", g_cmp_k, "K or A..B");
  for (auto* c : {g_pk, g_cmp}) c->add_option("--quad-tol", g_qtol)->check(CLI::PositiveNumber);
  for (auto* c : {g_orbit, g_cmp}) {
    c->add_option("--iters", g_iters)->check(CLI::NonNegativeNumber);
    c->add_option("--burn-in", g_burn)->check(CLI::NonNegativeNumber);
    c->add_option("--seed", g_seed);
    c->add_option("--start", g_start, "x,y; random from --seed when omitted");
  }
  g_orbit->add_option("--max-digit", g_print, "largest digit listed")->check(CLI::NonNegativeNumber);

  // tables
  auto* tables = app.add_subcommand("tables", "bundled closed-form tables");
  tables->require_subcommand(1);
  auto* tb_export = tables->add_subcommand("export", "print a table");
  std::string tb_which, tb_format = "tbl";
  tb_export->add_option("--which", tb_which)->required();
  tb_export->add_option("--format", tb_format)->check(CLI::IsMember({"tbl", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*classify) {
      auto ts = triples_from(c_all, c_triple);
      if (c_format == "csv") {
        out << "triple,behavior,jordan_class,char_poly\n";
        for (auto& t : ts)
          out << csv_triple(t) << "," << to_string(behavior(t)) << "," << to_string(jordan_class(t)) << ","
              << to_string(char_poly(f1_of(t))) << "\n";
      } else {
        json rows = json::array();
        int poly = 0;
        for (auto& t : ts) {
          Behavior b = behavior(t);
          poly += b == Behavior::Polynomial;
          rows.push_back({{"triple", to_string(t)},
                          {"sigma", name(t.sigma)},
                          {"tau0", name(t.tau0)},
                          {"tau1", name(t.tau1)},
                          {"behavior", to_string(b)},
                          {"jordan_class", to_string(jordan_class(t))},
                          {"char_poly", to_string(char_poly(f1_of(t)))}});
        }
        json j{{"rows", rows}, {"census", {{"polynomial", poly}, {"non-polynomial", ts.size() - poly}}}};
        out << j.dump() << "\n";
      }
      return 0;
    }

    if (*expand_cmd) {
      if (e_triple.empty() == e_schedule.empty()) throw UsageError("pass exactly one of --triple and --schedule");
      MapSchedule s = e_schedule.empty() ? MapSchedule{{parse_triple(e_triple)}} : parse_schedule(e_schedule);
      QPoint p = parse_point(e_point);
      if (!in_closed_triangle(p)) throw OutsideDomain("point " + to_string(p) + " is outside the triangle 1 >= x >= y >= 0");
      DigitSequence d = expand(s, p, e_steps, e_kmax);
      out << json{{"digits", d.digits}, {"terminated", d.terminated}}.dump() << "\n";
      return 0;
    }

    if (*sub) {
      PermTriple t = parse_triple(s_triple);
      std::optional<QPoint> p;
      if (!s_point.empty()) p = parse_point(s_point);
      TripMap m(t);
      auto v = m.vertices(s_k);
      json j{{"triple", to_string(t)},
             {"k", s_k},
             {"vertices", {to_string(v[0]), to_string(v[1]), to_string(v[2])}},
             {"area", to_string(shoelace(v))}};
      if (p) {
        auto b = m.barycentric(s_k, *p);
        j["point"] = to_string(*p);
        j["barycentric"] = {to_string(b[0]), to_string(b[1]), to_string(b[2])};
        j["contains"] = m.contains(s_k, *p);
      }
      out << j.dump() << "\n";
      return 0;
    }

    if (*t_eval) {
      PermTriple t = parse_triple(t_triple);
      DPoint q = parse_dpoint(t_point);
      TailPolicy pol = parse_policy(t_policy);
      if (!in_open_triangle(q)) throw DomainError("transfer eval needs an interior point");
      BranchSystem bs(t, t_kmax, pol);
      SumResult r;
      if (t_f == "one") r = bs.apply([](double, double) { return 1.0; }, q, t_tol);
      else if (t_f == "xy") r = bs.apply([](double x, double y) { return x * y; }, q, t_tol);
      else {
        auto h = eigenfunction(t);
        if (!h) throw RowMissing("no eigenfunction tabulated for " + to_string(t));
        r = bs.apply([&](double x, double y) { return (*h)(x, y); }, q, t_tol);
      }
      out << json{{"triple", to_string(t)}, {"point", t_point}, {"f", t_f}, {"value", num(r.value)},
                  {"error_bound", num(r.error)}, {"terms", r.terms}, {"policy", to_string(r.policy)}}
                 .dump()
          << "\n";
      return 0;
    }

    if (*t_eigen) {
      auto ts = triples_from(t_all, t_triple, &load_table("eigenfunctions"));
      for (auto& t : ts)
        if (!eigenfunction(t)) throw RowMissing("no eigenfunction tabulated for " + to_string(t));
      out << "triple,max_residual,worst_x,worst_y,error_bound,pass\n";
      for (auto& t : ts) {
        EigenCheck c = check_eigen(t, t_grid, t_tol, t_perturb, t_kmax);
        out << csv_triple(t) << "," << fmt(c.max_residual) << "," << fmt(c.worst.x) << "," << fmt(c.worst.y) << ","
            << fmt(c.max_error_bound) << "," << (c.pass ? "pass" : "fail") << "\n";
      }
      return 0;
    }

    if (*t_banach) {
      auto ts = triples_from(t_all, t_triple, &load_table("banach"));
      for (auto& t : ts)
        if (!banach_weight(t)) throw RowMissing("no Banach weight tabulated for " + to_string(t));
      SummandSource src = t_source == "table" ? SummandSource::Table : SummandSource::Generic;
      out << "triple,median_at_100,max_at_100,ratio_at_100,max_at_cap,ratio_at_cap,bounded\n";
      for (auto& t : ts) {
        BanachCheck c = check_banach_bound(t, t_grid, t_kmax, src);
        bool ok = c.finite && c.sublog_growth && c.ratio_at_100 <= t_ratio && c.ratio_at_cap <= t_ratio;
        out << csv_triple(t) << "," << fmt(c.median_at_100) << "," << fmt(c.max_at_100) << "," << fmt(c.ratio_at_100)
            << "," << fmt(c.max_at_cap) << "," << fmt(c.ratio_at_cap) << "," << (ok ? "yes" : "no") << "\n";
      }
      return 0;
    }

    if (*h_verify) {
      PermTriple t = parse_triple(h_triple);
      DPoint q = parse_dpoint(h_point);
      Representation r = verify_representation(t, radial_by_name(h_phi), q, h_tol);
      json j{{"triple", to_string(t)},
             {"phi", h_phi},
             {"point", h_point},
             {"lhs", num(r.lhs)},
             {"rhs_integral", num(r.rhs1)},
             {"rhs_series", num(r.rhs2)},
             {"r1", num(r.r1())},
             {"r2", num(r.r2())},
             {"series_terms", r.terms},
             {"prefactor", num(r.prefactor)},
             {"reading", "K weighted by t/(e^t-1) in t and integrated against dm(s); prefactor w_k j(a_k,b_k) (k+l)^2"},
             {"alternate", {{"ds_weighting_r1", num(r.r1_alt())}, {"inverse_h_squared_r1", num(r.r1_printed())}}},
             {"pass", r.r1() <= h_tol && r.r2() <= h_tol}};
      out << j.dump() << "\n";
      return 0;
    }

    if (*g_pk) {
      PermTriple t = parse_triple(g_triple);
      auto [a, b] = parse_range(g_k);
      require_density(t);
      if (a == b) {
        out << fmt(pk_integral(t, a, g_qtol).value) << "\n";
        return 0;
      }
      out << "k,p_integral,error\n";
      for (long k = a; k <= b; ++k) {
        QuadResult q = pk_integral(t, k, g_qtol);
        out << k << "," << fmt(q.value) << "," << fmt(q.error) << "\n";
      }
      return 0;
    }

    if (*g_orbit || *g_cmp) {
      PermTriple t = parse_triple(g_triple);
      std::optional<DPoint> start;
      if (!g_start.empty()) start = parse_dpoint(g_start);
      if (*g_orbit) {
        FrequencyRecord rec = orbit_frequencies(t, start, g_iters, g_burn, g_seed);
        out << "k,count,frequency\n";
        for (long k = 0; k <= g_print; ++k) {
          auto it = rec.counts.find(k);
          out << k << "," << (it == rec.counts.end() ? 0 : it->second) << "," << fmt(rec.frequency(k)) << "\n";
        }
        return 0;
      }
      auto [a, b] = parse_range(g_cmp_k);
      require_density(t);
      auto rows = compare(t, b, g_iters, g_qtol, g_burn, g_seed, start);
      out << "k,p_integral,p_orbit,abs_diff,pass\n";
      for (auto& r : rows) {
        if (r.k < a) continue;
        out << r.k << "," << fmt(r.p_integral) << "," << fmt(r.p_orbit) << "," << fmt(r.abs_diff) << ","
            << (r.pass ? "pass" : "fail") << "\n";
      }
      return 0;
    }

    if (*tb_export) {
      const Table& tb = load_table(table_file(tb_which));
      if (tb_format == "tbl") {
        out << "# triple | kind | expression\n";
        for (auto& r : tb.rows()) out << to_string(r.triple) << " | " << r.kind << " | " << r.expr.str() << "\n";
      } else {
        json rows = json::array();
        for (auto& r : tb.rows())
          rows.push_back({{"triple", to_string(r.triple)}, {"kind", r.kind}, {"expression", r.expr.str()}});
        out << rows.dump() << "\n";
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no command\n";
  return 2;
}

}  // namespace trip::cli
