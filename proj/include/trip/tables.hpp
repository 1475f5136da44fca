#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "expr.hpp"
#include "s3_mat.hpp"

#ifndef TRIP_TABLES_DIR_DEFAULT
#define TRIP_TABLES_DIR_DEFAULT "tables"
#endif

namespace trip {

struct DataFileMissing : DomainError {
  using DomainError::DomainError;
};
struct RowMissing : DomainError {
  using DomainError::DomainError;
};

struct TableRow {
  PermTriple triple;
  std::string kind;
  Expr expr;
  int line = 0;
};

class Table {
 public:
  Table() = default;
  Table(std::string name, std::vector<TableRow> rows) : name_(std::move(name)), rows_(std::move(rows)) {
    for (std::size_t i = 0; i < rows_.size(); ++i) index_[{rows_[i].triple, rows_[i].kind}] = i;
  }

  const std::string& name() const { return name_; }
  const std::vector<TableRow>& rows() const { return rows_; }

  const Expr* find(const PermTriple& t, const std::string& kind) const {
    auto it = index_.find({t, kind});
    return it == index_.end() ? nullptr : &rows_[it->second].expr;
  }
  const Expr& at(const PermTriple& t, const std::string& kind) const {
    if (auto* e = find(t, kind)) return *e;
    throw RowMissing("no '" + kind + "' row for " + to_string(t) + " in " + name_);
  }
  bool has(const PermTriple& t) const {
    for (auto& r : rows_)
      if (r.triple == t) return true;
    return false;
  }
  /// Distinct triples in file order.
  std::vector<PermTriple> triples() const {
    std::vector<PermTriple> out;
    for (auto& r : rows_)
      if (std::find(out.begin(), out.end(), r.triple) == out.end()) out.push_back(r.triple);
    return out;
  }

 private:
  std::string name_;
  std::vector<TableRow> rows_;
  std::map<std::pair<PermTriple, std::string>, std::size_t> index_;
};

inline std::filesystem::path tables_dir() {
  if (const char* env = std::getenv("TRIP_TABLES_DIR"); env && *env) return env;
  return TRIP_TABLES_DIR_DEFAULT;
}

/// Parses "triple | kind | expression" lines; '#' starts a comment line.
inline Table parse_table(const std::string& name, std::istream& in) {
  std::vector<TableRow> rows;
  std::string line;
  int no = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto p1 = t.find('|');
    auto p2 = p1 == std::string::npos ? p1 : t.find('|', p1 + 1);
    if (p2 == std::string::npos)
      throw ParseError(name + ":" + std::to_string(no) + ": expected 'triple | kind | expression'");
    try {
      rows.push_back({parse_triple(trim(t.substr(0, p1))), trim(t.substr(p1 + 1, p2 - p1 - 1)),
                      Expr(trim(t.substr(p2 + 1))), no});
    } catch (const ParseError& e) {
      throw ParseError(name + ":" + std::to_string(no) + ": " + e.what());
    }
  }
  return Table(name, std::move(rows));
}

/// Loads tables/<name>.tbl once per process.
inline const Table& load_table(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, Table> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto path = tables_dir() / (name + ".tbl");
  auto key = path.string();
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::ifstream in(path);
  if (!in) throw DataFileMissing("cannot open table file " + key + " (set TRIP_TABLES_DIR)");
  return cache.emplace(key, parse_table(name, in)).first->second;
}

}  // namespace trip
