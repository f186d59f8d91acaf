// Experiment drivers: convergence studies, energy audits, pattern runs and the
// scheme comparison, with CSV artifacts written under the configured output dir.

#pragma once

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "ieqdg/baselines.hpp"
#include "ieqdg/csv.hpp"
#include "ieqdg/ieq.hpp"
#include "ieqdg/presets.hpp"

namespace ieqdg {

namespace detail {

inline long step_count(double t_end, double dt) {
  const long n = std::lround(t_end / dt);
  if (n < 1 || std::abs(n * dt - t_end) > 1e-9 * std::max(1.0, std::abs(t_end))) {
    throw ConfigError("time step " + std::to_string(dt) + " does not divide t_end " +
                      std::to_string(t_end));
  }
  return n;
}

inline std::string dt_label(double dt) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", dt);
  return buf;
}

inline void write_snapshot(const std::string& path, const Space& sp, const Eigen::VectorXd& coeffs,
                           double t) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open snapshot file for writing: " + path);
  const Eigen::VectorXd nodal = eval_at_nodes(sp, coeffs);
  const int G = sp.rule.order;
  out << "# t=" << fmt17(t) << " nx=" << sp.mesh.nx << " ny=" << sp.mesh.ny
      << " samples_per_cell=" << sp.nvol << "\n";
  if (sp.mesh.dim == 1) {
    for (int c = 0; c < sp.mesh.n_cells(); ++c) {
      for (int q = 0; q < sp.nvol; ++q) {
        const auto xy = sp.node_xy(c, q);
        out << fmt17(xy[0]) << ",0," << fmt17(nodal[c * sp.nvol + q]) << "\n";
      }
    }
    return;
  }
  // Raster order: outer loop over global node rows (ascending y), inner over x.
  for (int iy = 0; iy < sp.mesh.ny; ++iy) {
    for (int beta = 0; beta < G; ++beta) {
      for (int ix = 0; ix < sp.mesh.nx; ++ix) {
        const int c = sp.mesh.cell_index(ix, iy);
        for (int alpha = 0; alpha < G; ++alpha) {
          const int q = beta * G + alpha;
          const auto xy = sp.node_xy(c, q);
          out << fmt17(xy[0]) << ',' << fmt17(xy[1]) << ',' << fmt17(nodal[c * sp.nvol + q])
              << "\n";
        }
      }
    }
  }
}

}  // namespace detail

struct RunOptions {
  double dt = 0.0;
  double t_end = 0.0;
  bool enforce_monotone = false;  ///< hard-fail on any modified-energy increase
  long snapshot_every = -1;       ///< -1: no snapshots; 0: initial+final; k>0: every k steps
  std::string snapshot_dir;
  std::string ledger_path;  ///< empty: no ledger file
  std::vector<std::string> ledger_comments;
};

struct SingleRunResult {
  std::vector<LedgerRow> ledger;
  Eigen::VectorXd u, q;
  double t_final = 0.0;
  double steady_residual = 0.0;  ///< ||u^{n+1}-u^n|| / dt at the final step
  long max_outer_iterations = 0;
  long total_linear_solves = 0;
  double max_identity_residual = 0.0;
};

/// March an IEQ state to t_end, collecting the ledger and optional snapshots.
inline SingleRunResult run_ieq_loop(IEQState& state, int order, const RunOptions& opt) {
  const long steps = detail::step_count(opt.t_end, opt.dt);
  SingleRunResult out;
  const EnergyPair e0 = energy(state);
  out.ledger.push_back({0, 0.0, e0.E, e0.calE, 0.0, 0.0, 0, 0});

  auto snapshot = [&](long step) {
    if (opt.snapshot_every < 0) return;
    const bool due = (step == 0 || step == steps ||
                      (opt.snapshot_every > 0 && step % opt.snapshot_every == 0));
    if (!due) return;
    detail::write_snapshot(opt.snapshot_dir + "/snapshot_" + std::to_string(step) + ".csv",
                           *state.space, state.u, state.t);
  };
  snapshot(0);

  double last_decrement = 0.0;
  for (long n = 1; n <= steps; ++n) {
    const StepReport rep =
        (order == 1) ? step_first_order(state, opt.dt) : step_second_order(state, opt.dt);
    if (opt.enforce_monotone) {
      const double slack = 10.0 * state.solve_tol * std::max(std::abs(rep.E_before), 1.0);
      if (rep.E_after > rep.E_before + slack) {
        throw AssertionFailure("energy increased at step " + std::to_string(n) + ": " +
                               fmt17(rep.E_before) + " -> " + fmt17(rep.E_after));
      }
    }
    out.ledger.push_back({n, state.t, rep.E_after, rep.calE_after, rep.decrement,
                          rep.identity_residual, rep.solver_iterations, 1});
    out.max_identity_residual =
        std::max(out.max_identity_residual, std::abs(rep.identity_residual));
    out.total_linear_solves += 1;
    out.max_outer_iterations = std::max(out.max_outer_iterations, 1L);
    last_decrement = rep.decrement;
    snapshot(n);
  }
  out.u = state.u;
  out.q = state.q;
  out.t_final = state.t;
  out.steady_residual = std::sqrt(last_decrement / opt.dt);
  if (!opt.ledger_path.empty()) write_ledger(opt.ledger_path, out.ledger, opt.ledger_comments);
  return out;
}

/// March a baseline state (secant / gn) to t_end.
inline SingleRunResult run_baseline_loop(BaselineState& state, BaselineVariant variant,
                                         const IterationControl& ctrl, const RunOptions& opt) {
  const long steps = detail::step_count(opt.t_end, opt.dt);
  SingleRunResult out;
  // Baselines report the original energy (no B shift); E and calE coincide.
  const double e0 = baseline_energy(state);
  out.ledger.push_back({0, 0.0, e0, e0, 0.0, 0.0, 0, 0});
  double last_decrement = 0.0;
  for (long n = 1; n <= steps; ++n) {
    const BaselineStepReport rep = step_baseline(state, opt.dt, ctrl, variant);
    out.ledger.push_back({n, state.t, rep.E_after, rep.E_after, rep.decrement,
                          rep.energy_residual, rep.solver_iterations, rep.outer_iterations});
    out.max_outer_iterations = std::max(out.max_outer_iterations, long(rep.outer_iterations));
    out.total_linear_solves += rep.outer_iterations;
    out.max_identity_residual = std::max(out.max_identity_residual, std::abs(rep.energy_residual));
    last_decrement = rep.decrement;
  }
  out.u = state.u;
  out.q = state.q;
  out.t_final = state.t;
  out.steady_residual = std::sqrt(last_decrement / opt.dt);
  if (!opt.ledger_path.empty()) write_ledger(opt.ledger_path, out.ledger, opt.ledger_comments);
  return out;
}

namespace detail {

inline ModelSpec make_model(const ResolvedConfig& rc, const Problem& pb) {
  ModelSpec m;
  m.a = rc.a;
  m.potential = swift_hohenberg_potential(rc.eps, rc.g, rc.B);
  m.source = pb.source;
  return m;
}

inline Space make_space_for(const ResolvedConfig& rc, int n) {
  const auto kind =
      rc.bc_family == BCFamily::periodic ? BoundaryKind::periodic : BoundaryKind::physical;
  const Mesh mesh = build_rect_mesh(rc.dim, rc.x0, rc.x1, rc.y0, rc.y1, n,
                                    rc.dim == 2 ? n : 1, kind);
  return make_space(mesh, rc.degree, rc.basis, rc.quad_order);
}

inline int scheme_order(const std::string& scheme) { return scheme == "ieq1" ? 1 : 2; }

inline ErrorSampling error_sampling(const ResolvedConfig& rc) {
  ErrorSampling es;
  es.gauss_order = rc.error_quad;
  es.linf_cell_extrema = rc.error_linf_cellmax;
  return es;
}

inline SingleRunResult run_scheme(const ResolvedConfig& rc, const Problem& pb, const Space& sp,
                                  const std::string& scheme, const RunOptions& opt) {
  const ModelSpec model = make_model(rc, pb);
  if (scheme == "ieq1" || scheme == "ieq2") {
    IEQState state = pb.random_init
                         ? init_state_from_coeffs(sp, model, pb.bc,
                                                  random_initial_coeffs(sp, rc.seed), rc.solve_tol)
                         : init_state(sp, model, pb.bc, pb.u0, rc.solve_tol);
    return run_ieq_loop(state, scheme_order(scheme), opt);
  }
  BaselineVariant variant = BaselineVariant::secant;
  if (scheme == "gn1") variant = BaselineVariant::gn1;
  if (scheme == "gn2") variant = BaselineVariant::gn2;
  BaselineState state = init_baseline_state(sp, model, pb.bc, rc.eps, rc.g, pb.u0, rc.solve_tol);
  state.printed_forms = rc.printed_gn;
  IterationControl ctrl{rc.eta, rc.max_outer_iters};
  return run_baseline_loop(state, variant, ctrl, opt);
}

}  // namespace detail

/// Manufactured-solution mesh refinement study; writes errors.csv and per-mesh ledgers.
inline std::vector<ErrorRow> run_convergence_space(const ResolvedConfig& rc) {
  const Problem pb = build_problem(rc);
  if (!pb.exact) throw ConfigError("convergence_space requires a preset with an exact solution");
  if (rc.mesh_list.empty()) throw ConfigError("convergence_space requires mesh_list");
  ensure_dir(rc.output_dir);

  std::vector<ErrorRow> rows;
  std::vector<double> l2s, linfs;
  for (const double nd : rc.mesh_list) {
    const int n = static_cast<int>(nd);
    const Space sp = detail::make_space_for(rc, n);
    RunOptions opt;
    opt.dt = rc.dt;
    opt.t_end = rc.t_end;
    opt.ledger_path = rc.output_dir + "/energy_N" + std::to_string(n) + ".csv";
    const SingleRunResult res = detail::run_scheme(rc, pb, sp, rc.scheme, opt);
    const double t = res.t_final;
    const auto [l2, linf] =
        error_norms(sp, DGField(sp, res.u),
                    [&](double x, double y) { return pb.exact(x, y, t); },
                    detail::error_sampling(rc));
    ErrorRow row;
    row.label = std::to_string(n);
    row.l2 = l2;
    row.linf = linf;
    l2s.push_back(l2);
    linfs.push_back(linf);
    if (rows.size() > 0) {
      row.has_eoc = true;
      row.eoc_l2 = std::log2(l2s[l2s.size() - 2] / l2);
      row.eoc_linf = std::log2(linfs[linfs.size() - 2] / linf);
    }
    rows.push_back(row);
  }
  write_error_table(rc.output_dir + "/errors.csv", rows);
  return rows;
}

/// Time refinement study against the exact solution or a self-computed fine-step
/// reference; one table per scheme when several schemes are configured.
inline std::map<std::string, std::vector<ErrorRow>> run_convergence_time(
    const ResolvedConfig& rc) {
  const Problem pb = build_problem(rc);
  if (rc.dt_list.empty()) throw ConfigError("convergence_time requires dt_list");
  const bool vs_exact = rc.error_ref == "exact";
  if (vs_exact && !pb.exact) throw ConfigError("error_ref=exact requires an exact solution");
  ensure_dir(rc.output_dir);
  const Space sp = detail::make_space_for(rc, rc.nx);

  std::vector<std::string> schemes = rc.schemes.empty()
                                         ? std::vector<std::string>{rc.scheme}
                                         : rc.schemes;
  std::map<std::string, std::vector<ErrorRow>> tables;
  for (const auto& scheme : schemes) {
    Eigen::VectorXd ref;
    if (!vs_exact) {
      RunOptions opt;
      opt.dt = rc.dt_ref;
      opt.t_end = rc.t_end;
      ref = detail::run_scheme(rc, pb, sp, scheme, opt).u;
    }
    std::vector<ErrorRow> rows;
    std::vector<double> l2s, linfs;
    for (const double dt : rc.dt_list) {
      RunOptions opt;
      opt.dt = dt;
      opt.t_end = rc.t_end;
      opt.ledger_path =
          rc.output_dir + "/energy_" + scheme + "_dt" + detail::dt_label(dt) + ".csv";
      const SingleRunResult res = detail::run_scheme(rc, pb, sp, scheme, opt);
      double l2 = 0, linf = 0;
      if (vs_exact) {
        const double t = res.t_final;
        std::tie(l2, linf) =
            error_norms(sp, DGField(sp, res.u),
                        [&](double x, double y) { return pb.exact(x, y, t); },
                        detail::error_sampling(rc));
      } else {
        std::tie(l2, linf) = field_diff_norms(sp, res.u, ref, detail::error_sampling(rc));
      }
      ErrorRow row;
      row.label = detail::dt_label(dt);
      row.l2 = l2;
      row.linf = linf;
      l2s.push_back(l2);
      linfs.push_back(linf);
      if (rows.size() > 0) {
        row.has_eoc = true;
        row.eoc_l2 = std::log2(l2s[l2s.size() - 2] / l2);
        row.eoc_linf = std::log2(linfs[linfs.size() - 2] / linf);
      }
      rows.push_back(row);
    }
    const std::string suffix = schemes.size() > 1 ? "_" + scheme : "";
    write_error_table(rc.output_dir + "/errors" + suffix + ".csv", rows);
    tables[scheme] = rows;
  }
  return tables;
}

struct EnergyStudyResult {
  std::vector<double> dts;
  std::vector<double> final_calE;
  std::vector<double> max_identity_residual;
};

/// Energy audit over a list of time steps; hard-fails on any energy increase.
inline EnergyStudyResult run_energy_study(const ResolvedConfig& rc) {
  const Problem pb = build_problem(rc);
  if (rc.dt_list.empty()) throw ConfigError("energy_study requires dt_list");
  ensure_dir(rc.output_dir);
  const Space sp = detail::make_space_for(rc, rc.nx);
  EnergyStudyResult out;
  for (const double dt : rc.dt_list) {
    RunOptions opt;
    opt.dt = dt;
    opt.t_end = rc.t_end;
    opt.enforce_monotone = true;
    opt.ledger_path = rc.output_dir + "/energy_dt" + detail::dt_label(dt) + ".csv";
    const SingleRunResult res = detail::run_scheme(rc, pb, sp, rc.scheme, opt);
    out.dts.push_back(dt);
    out.final_calE.push_back(res.ledger.back().calE);
    out.max_identity_residual.push_back(res.max_identity_residual);
  }
  return out;
}

struct PatternResult {
  double steady_residual = 0.0;
  double final_calE = 0.0;
  long steps = 0;
};

/// Seeded pattern run with snapshots and a steady-state report.
inline PatternResult run_pattern(const ResolvedConfig& rc) {
  const Problem pb = build_problem(rc);
  ensure_dir(rc.output_dir);
  const Space sp = detail::make_space_for(rc, rc.nx);
  RunOptions opt;
  opt.dt = rc.dt;
  opt.t_end = rc.t_end;
  opt.enforce_monotone = true;
  opt.snapshot_every = rc.snapshot_every;
  opt.snapshot_dir = rc.output_dir;
  opt.ledger_path = rc.output_dir + "/energy.csv";
  if (pb.random_init) {
    opt.ledger_comments = {"seed=" + std::to_string(rc.seed) +
                           " init=cell_constant_uniform(-0.5,0.5) generator=mt19937_64"};
  }
  const SingleRunResult res = detail::run_scheme(rc, pb, sp, rc.scheme, opt);
  std::cout << "pattern run finished: t=" << fmt17(res.t_final)
            << " calE=" << fmt17(res.ledger.back().calE)
            << " steady_residual=" << fmt17(res.steady_residual) << "\n";
  return {res.steady_residual, res.ledger.back().calE, static_cast<long>(res.ledger.size()) - 1};
}

struct ComparisonRow {
  std::string scheme;
  double dt = 0.0;
  long steps = 0;
  long max_outer_iterations = 0;
  double wall_seconds = 0.0;  ///< informational; printed to stdout, not to the CSV
};

/// Outer-iteration comparison of the configured schemes over dt_list.
inline std::vector<ComparisonRow> run_scheme_comparison(const ResolvedConfig& rc) {
  const Problem pb = build_problem(rc);
  if (rc.dt_list.empty() || rc.schemes.empty()) {
    throw ConfigError("scheme_comparison requires schemes and dt_list");
  }
  ensure_dir(rc.output_dir);
  const Space sp = detail::make_space_for(rc, rc.nx);
  std::vector<ComparisonRow> rows;
  for (const auto& scheme : rc.schemes) {
    for (const double dt : rc.dt_list) {
      RunOptions opt;
      opt.dt = dt;
      opt.t_end = rc.t_end;
      opt.ledger_path =
          rc.output_dir + "/energy_" + scheme + "_dt" + detail::dt_label(dt) + ".csv";
      const auto t0 = std::chrono::steady_clock::now();
      const SingleRunResult res = detail::run_scheme(rc, pb, sp, scheme, opt);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const long steps = static_cast<long>(res.ledger.size()) - 1;
      if ((scheme == "ieq1" || scheme == "ieq2") && res.total_linear_solves != steps) {
        throw AssertionFailure("IEQ scheme performed more than one linear solve per step");
      }
      rows.push_back({scheme, dt, steps, res.max_outer_iterations, secs});
      std::cout << "comparison: scheme=" << scheme << " dt=" << detail::dt_label(dt)
                << " max_outer_iters=" << res.max_outer_iterations << " wall_s=" << secs << "\n";
    }
  }
  std::ofstream out(rc.output_dir + "/comparison.csv");
  if (!out) throw ConfigError("cannot open comparison.csv for writing");
  out << "scheme,dt,steps,max_outer_iters\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << detail::dt_label(r.dt) << ',' << r.steps << ','
        << r.max_outer_iterations << "\n";
  }
  return rows;
}

/// Plain single run (ledger plus optional snapshots).
inline SingleRunResult run_single(const ResolvedConfig& rc) {
  const Problem pb = build_problem(rc);
  if (rc.dt <= 0.0) throw ConfigError("single mode requires dt");
  ensure_dir(rc.output_dir);
  const Space sp = detail::make_space_for(rc, rc.nx);
  RunOptions opt;
  opt.dt = rc.dt;
  opt.t_end = rc.t_end;
  opt.snapshot_every = rc.snapshot_every > 0 ? rc.snapshot_every : -1;
  opt.snapshot_dir = rc.output_dir;
  opt.ledger_path = rc.output_dir + "/energy.csv";
  return detail::run_scheme(rc, pb, sp, rc.scheme, opt);
}

/// Entry point used by the CLI `run` subcommand.
inline void run_experiment(const ResolvedConfig& rc) {
  if (rc.mode == "convergence_space") {
    run_convergence_space(rc);
  } else if (rc.mode == "convergence_time") {
    run_convergence_time(rc);
  } else if (rc.mode == "energy_study") {
    run_energy_study(rc);
  } else if (rc.mode == "pattern") {
    run_pattern(rc);
  } else if (rc.mode == "scheme_comparison") {
    run_scheme_comparison(rc);
  } else {
    run_single(rc);
  }
}

}  // namespace ieqdg
