// CSV artifact writers with deterministic formatting (17 significant digits).

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ieqdg/errors.hpp"

namespace ieqdg {

/// Shortest round-trip-safe decimal form used for every float written to disk.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct LedgerRow {
  long step = 0;
  double t = 0.0;
  double E = 0.0;
  double calE = 0.0;
  double decrement = 0.0;
  double identity_residual = 0.0;
  long solver_iters = 0;
  long outer_iters = 0;
};

/// Energy ledger: optional provenance comment lines, then the fixed header.
inline void write_ledger(const std::string& path, const std::vector<LedgerRow>& rows,
                         const std::vector<std::string>& comments = {}) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open ledger file for writing: " + path);
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "step,t,E,calE,decrement,identity_residual,solver_iters,outer_iters\n";
  for (const auto& r : rows) {
    out << r.step << ',' << fmt17(r.t) << ',' << fmt17(r.E) << ',' << fmt17(r.calE) << ','
        << fmt17(r.decrement) << ',' << fmt17(r.identity_residual) << ',' << r.solver_iters << ','
        << r.outer_iters << "\n";
  }
}

struct ErrorRow {
  std::string label;  ///< N or dt
  double l2 = 0.0;
  double linf = 0.0;
  bool has_eoc = false;
  double eoc_l2 = 0.0;
  double eoc_linf = 0.0;
};

inline void write_error_table(const std::string& path, const std::vector<ErrorRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open error table for writing: " + path);
  out << "N_or_dt,L2,Linf,EOC_L2,EOC_Linf\n";
  for (const auto& r : rows) {
    out << r.label << ',' << fmt17(r.l2) << ',' << fmt17(r.linf) << ',';
    if (r.has_eoc) out << fmt17(r.eoc_l2) << ',' << fmt17(r.eoc_linf);
    else out << ',';
    out << "\n";
  }
}

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + dir);
}

}  // namespace ieqdg
