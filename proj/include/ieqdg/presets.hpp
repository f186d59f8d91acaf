// Resolution of raw config keys into a fully-specified experiment, and the
// preset problem definitions (domains, data, manufactured solutions, loads).

#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ieqdg/config.hpp"
#include "ieqdg/field.hpp"
#include "ieqdg/model.hpp"

namespace ieqdg {

struct ResolvedConfig {
  std::string preset = "custom";
  std::string mode;
  std::string scheme = "ieq2";
  std::vector<std::string> schemes;
  int degree = 2;
  BasisSpace basis = BasisSpace::total_degree;
  int dim = 2;
  int nx = 0, ny = 0;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  BCFamily bc_family = BCFamily::periodic;
  double beta0 = std::numeric_limits<double>::quiet_NaN();  ///< NaN = degree-based default
  double beta1 = 1.0;
  double a = 2.0;
  double eps = 0.025;
  double g = 0.0;
  double B = 1.0;
  double dt = 0.0;  ///< 0 = preset/degree default
  std::vector<double> dt_list;
  double dt_ref = 0.00390625;  // 2^-8
  double t_end = 0.1;
  double eta = 1e-12;
  int max_outer_iters = 500;
  std::uint64_t seed = 12345;
  std::string output_dir = "out";
  long snapshot_every = 0;  ///< 0 = initial and final snapshot only (pattern mode)
  int quad_order = 0;       ///< 0 = degree+1
  std::vector<double> mesh_list;
  double solve_tol = 1e-12;
  std::string error_ref = "reference";  ///< convergence_time: "reference" or "exact"
  int error_quad = 10;                  ///< Gauss sampling order of the error norms
  bool error_linf_cellmax = false;      ///< sample Linf on a corner-including grid too
  bool printed_gn = false;
};

namespace detail {

inline BCFamily parse_family(const std::string& s) {
  if (s == "periodic") return BCFamily::periodic;
  if (s == "clamped") return BCFamily::clamped;
  if (s == "simply_supported") return BCFamily::simply_supported;
  if (s == "gen_neumann") return BCFamily::gen_neumann;
  throw ConfigError("config: unknown bc family '" + s + "'");
}

inline std::string family_name(BCFamily f) {
  switch (f) {
    case BCFamily::periodic: return "periodic";
    case BCFamily::clamped: return "clamped";
    case BCFamily::simply_supported: return "simply_supported";
    default: return "gen_neumann";
  }
}

inline void preset_defaults(ResolvedConfig& rc) {
  const std::string& p = rc.preset;
  const double pi = M_PI;
  auto square = [&](double lo, double hi) { rc.x0 = rc.y0 = lo; rc.x1 = rc.y1 = hi; };
  if (p == "custom") return;
  if (p == "ex41_case1" || p == "ex41_case2" || p == "ex41_case3" || p == "ex42") {
    rc.mode = "convergence_space";
    rc.degree = 1;
    rc.t_end = 0.1;
    rc.mesh_list = {8, 16, 32, 64};
    rc.eps = 0.025;
    rc.g = 0.0;
    if (p == "ex41_case1") {
      square(-2 * pi, 2 * pi);
      rc.bc_family = BCFamily::periodic;
      rc.error_linf_cellmax = true;
    }
    if (p == "ex41_case2") { square(0, 2 * pi); rc.bc_family = BCFamily::simply_supported; rc.beta0 = 0.0; }
    if (p == "ex41_case3") { square(-pi, pi); rc.bc_family = BCFamily::gen_neumann; rc.g = 0.05; }
    if (p == "ex42") { square(0, 2 * pi); rc.bc_family = BCFamily::clamped; rc.beta1 = 1.0; }
    return;
  }
  if (p == "ex43") {
    rc.mode = "convergence_time";
    square(-2 * pi, 2 * pi);
    rc.bc_family = BCFamily::gen_neumann;
    rc.degree = 2;
    rc.t_end = 2.0;
    rc.dt_list = {0.125, 0.0625, 0.03125, 0.015625};
    rc.dt_ref = 0.00390625;
    rc.error_ref = "reference";
    // Large dt on fine meshes: the double-precision residual floor of the stiff
    // Schur system sits above 1e-12.
    rc.solve_tol = 1e-10;
    return;
  }
  if (p == "ex44") {
    rc.mode = "energy_study";
    square(0, 40);
    rc.bc_family = BCFamily::gen_neumann;
    rc.degree = 2;
    rc.nx = 64;
    rc.eps = 2.0;
    rc.g = 0.0;
    rc.t_end = 10.0;
    rc.dt_list = {1e-3, 1e-2, 1e-1, 1.0};
    rc.solve_tol = 1e-11;
    return;
  }
  if (p == "ex45_rolls" || p == "ex45_hex") {
    rc.mode = "pattern";
    square(0, 100);
    rc.bc_family = BCFamily::periodic;
    rc.degree = 2;
    rc.nx = 128;
    rc.dt = 0.01;
    rc.snapshot_every = 500;
    if (p == "ex45_rolls") { rc.eps = 0.3; rc.g = 0.0; rc.t_end = 60.0; }
    else { rc.eps = 0.1; rc.g = 1.0; rc.t_end = 198.0; }
    return;
  }
  if (p == "ex46_case1") {
    rc.mode = "convergence_time";
    square(-2 * pi, 2 * pi);
    rc.bc_family = BCFamily::gen_neumann;
    rc.degree = 2;
    rc.nx = 32;
    rc.eps = 0.025;
    rc.g = 0.05;
    rc.t_end = 2.0;
    rc.dt_list = {0.25, 0.125, 0.0625, 0.03125};
    rc.schemes = {"ieq2", "secant", "gn1", "gn2"};
    rc.error_ref = "exact";
    rc.eta = 1e-12;
    rc.solve_tol = 1e-10;
    return;
  }
  if (p == "ex46_case2") {
    rc.mode = "scheme_comparison";
    square(0, 40);
    rc.bc_family = BCFamily::gen_neumann;
    rc.degree = 2;
    rc.nx = 64;
    rc.eps = 2.0;
    rc.g = 0.0;
    rc.t_end = 10.0;
    rc.dt_list = {0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
    rc.schemes = {"ieq2", "secant", "gn1", "gn2"};
    rc.eta = 1e-10;
    rc.B = 1e4;
    rc.solve_tol = 1e-10;
    return;
  }
  throw ConfigError("config: unknown preset '" + p + "'");
}

/// Paper time steps for the spatial studies, by polynomial degree.
inline double default_dt_space(const std::string& preset, int degree) {
  if (degree == 1) return 1e-3;
  if (degree == 2) return 1e-4;
  if (degree == 3) {
    return (preset == "ex41_case2" || preset == "ex41_case3") ? 5e-5 : 1e-5;
  }
  throw ConfigError("config: no default dt for degree " + std::to_string(degree) +
                    "; set dt explicitly");
}

}  // namespace detail

inline ResolvedConfig resolve_config(const ConfigKV& kv) {
  ResolvedConfig rc;
  rc.preset = kv.get_string("preset", "custom");
  detail::preset_defaults(rc);

  rc.mode = kv.get_string("mode", rc.mode);
  rc.scheme = kv.get_string("scheme", rc.scheme);
  rc.schemes = kv.get_string_list("schemes", rc.schemes);
  rc.degree = static_cast<int>(kv.get_long("degree", rc.degree));
  const std::string basis_s = kv.get_string("basis", rc.basis == BasisSpace::total_degree
                                                         ? "total_degree"
                                                         : "tensor_product");
  if (basis_s == "total_degree") rc.basis = BasisSpace::total_degree;
  else if (basis_s == "tensor_product") rc.basis = BasisSpace::tensor_product;
  else throw ConfigError("config: unknown basis '" + basis_s + "'");
  rc.dim = static_cast<int>(kv.get_long("dim", rc.dim));
  rc.nx = static_cast<int>(kv.get_long("nx", rc.nx));
  rc.ny = static_cast<int>(kv.get_long("ny", rc.nx));
  if (kv.has("domain")) {
    const auto d = kv.get_double_list("domain", {});
    if (d.size() == 2) { rc.x0 = d[0]; rc.x1 = d[1]; }
    else if (d.size() == 4) { rc.x0 = d[0]; rc.x1 = d[1]; rc.y0 = d[2]; rc.y1 = d[3]; }
    else throw ConfigError("config: domain must have 2 or 4 entries");
  }
  rc.bc_family = detail::parse_family(kv.get_string("bc", detail::family_name(rc.bc_family)));
  rc.beta0 = kv.get_double("beta0", rc.beta0);
  rc.beta1 = kv.get_double("beta1", rc.beta1);
  rc.a = kv.get_double("a", rc.a);
  rc.eps = kv.get_double("eps", rc.eps);
  rc.g = kv.get_double("g", rc.g);
  rc.B = kv.get_double("B", rc.B);
  rc.dt = kv.get_double("dt", rc.dt);
  rc.dt_list = kv.get_double_list("dt_list", rc.dt_list);
  rc.dt_ref = kv.get_double("dt_ref", rc.dt_ref);
  rc.t_end = kv.get_double("t_end", rc.t_end);
  rc.eta = kv.get_double("eta", rc.eta);
  rc.max_outer_iters = static_cast<int>(kv.get_long("max_outer_iters", rc.max_outer_iters));
  rc.seed = kv.get_u64("seed", rc.seed);
  rc.output_dir = kv.get_string("output_dir", rc.output_dir);
  rc.snapshot_every = kv.get_long("snapshot_every", rc.snapshot_every);
  rc.quad_order = static_cast<int>(kv.get_long("quad_order", rc.quad_order));
  rc.mesh_list = kv.get_double_list("mesh_list", rc.mesh_list);
  rc.solve_tol = kv.get_double("solve_tol", rc.solve_tol);
  rc.error_ref = kv.get_string("error_ref", rc.error_ref);
  rc.error_quad = static_cast<int>(kv.get_long("error_quad", rc.error_quad));
  rc.error_linf_cellmax = kv.get_long("error_linf_cellmax", rc.error_linf_cellmax ? 1 : 0) != 0;
  rc.printed_gn = kv.get_long("use_printed_gn_forms", rc.printed_gn ? 1 : 0) != 0;

  // Derived defaults.
  if (rc.preset == "ex43" && !kv.has("nx")) {
    rc.nx = rc.scheme == "ieq1" ? 32 : 64;
    rc.ny = rc.nx;
  }
  if (rc.mode == "convergence_space" && rc.dt == 0.0) {
    rc.dt = detail::default_dt_space(rc.preset, rc.degree);
  }
  if (std::isnan(rc.beta0)) rc.beta0 = default_beta0(rc.degree);

  // Validation.
  static const std::set<std::string> modes = {"convergence_space", "convergence_time",
                                              "energy_study",      "pattern",
                                              "scheme_comparison", "single"};
  if (!modes.count(rc.mode)) throw ConfigError("config: mode must be set to one of convergence_space/convergence_time/energy_study/pattern/scheme_comparison/single");
  static const std::set<std::string> scheme_names = {"ieq1", "ieq2", "secant", "gn1", "gn2"};
  if (!scheme_names.count(rc.scheme)) throw ConfigError("config: unknown scheme '" + rc.scheme + "'");
  for (const auto& s : rc.schemes) {
    if (!scheme_names.count(s)) throw ConfigError("config: unknown scheme '" + s + "'");
  }
  if (rc.error_ref != "reference" && rc.error_ref != "exact") {
    throw ConfigError("config: error_ref must be 'reference' or 'exact'");
  }
  if (rc.mode != "convergence_space" && rc.nx <= 0) {
    throw ConfigError("config: nx must be positive (or supplied by the preset)");
  }
  if (rc.degree < 0) throw ConfigError("config: degree must be non-negative");
  return rc;
}

/// A fully wired problem: initial data, optional exact solution and source, BC data.
struct Problem {
  SpatialFn u0;  ///< null when the preset uses seeded random initial data
  std::function<double(double, double, double)> exact;
  std::function<double(double, double, double)> source;
  BCSpec bc;
  bool random_init = false;
};

inline Problem build_problem(const ResolvedConfig& rc) {
  Problem pb;
  pb.bc = make_bc(rc.bc_family, rc.beta0, rc.beta1);
  const double eps = rc.eps, g = rc.g;
  const std::string& p = rc.preset;

  if (p == "ex41_case1" || p == "ex41_case2" || p == "ex41_case3" || p == "ex42") {
    auto exact = [](double x, double y, double t) {
      return std::exp(-t / 4.0) * std::sin(x / 2.0) * std::sin(y / 2.0);
    };
    pb.exact = exact;
    pb.u0 = [exact](double x, double y) { return exact(x, y, 0.0); };
    pb.source = [eps, g, exact](double x, double y, double t) {
      const double v = exact(x, y, t);
      return -eps * v - g * v * v + v * v * v;
    };
    if (p == "ex42") {
      // Clamped data: u = 0 on the boundary, normal derivative from the exact solution.
      pb.bc.homogeneous = false;
      pb.bc.g1 = [](double, double, double, double, double) { return 0.0; };
      pb.bc.g2 = [](double x, double y, double t, double nx, double ny) {
        const double e = std::exp(-t / 4.0);
        return 0.5 * e * (nx * std::cos(x / 2.0) * std::sin(y / 2.0) +
                          ny * std::sin(x / 2.0) * std::cos(y / 2.0));
      };
    }
    return pb;
  }
  if (p == "ex43") {
    pb.u0 = [](double x, double y) { return std::sin(x / 4.0) * std::sin(y / 4.0); };
    return pb;
  }
  if (p == "ex44" || p == "ex46_case2") {
    pb.u0 = [](double x, double y) {
      const double xl = std::sin(2.0 * M_PI * y / 10.0) + 15.0;
      const double xr = std::cos(2.0 * M_PI * y / 10.0) + 25.0;
      return (x > xl && x < xr) ? 1.0 : -1.0;
    };
    return pb;
  }
  if (p == "ex45_rolls" || p == "ex45_hex") {
    pb.random_init = true;
    return pb;
  }
  if (p == "ex46_case1") {
    auto exact = [](double x, double y, double t) {
      return std::exp(-49.0 * t / 64.0) * std::sin(x / 4.0) * std::sin(y / 4.0);
    };
    pb.exact = exact;
    pb.u0 = [exact](double x, double y) { return exact(x, y, 0.0); };
    pb.source = [eps, g, exact](double x, double y, double t) {
      const double v = exact(x, y, t);
      return -eps * v - g * v * v + v * v * v;
    };
    return pb;
  }
  throw ConfigError("config: preset '" + p + "' does not define problem data; use a named preset");
}

/// Seeded random initial coefficients: i.i.d. uniform values in [-0.5, 0.5) on the
/// constant mode of each cell, higher modes zero. The raw engine output is mapped to
/// a double explicitly so artifacts are bit-reproducible across platforms.
inline Eigen::VectorXd random_initial_coeffs(const Space& sp, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(sp.n_dofs());
  for (int cell = 0; cell < sp.mesh.n_cells(); ++cell) {
    const double u01 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    c[cell * sp.N] = u01 - 0.5;
  }
  return c;
}

}  // namespace ieqdg
