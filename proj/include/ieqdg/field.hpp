// Discrete fields: coefficient storage, the shared-quadrature L2 projection,
// face traces with jump/average, norms, errors and EOC.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ieqdg/space.hpp"

namespace ieqdg {

/// Scalar function of physical coordinates (y ignored in 1D).
using SpatialFn = std::function<double(double, double)>;

/// Element of V_h: one coefficient vector of length N per cell, cell-major.
struct DGField {
  const Space* space = nullptr;
  Eigen::VectorXd coeffs;

  DGField() = default;
  explicit DGField(const Space& sp) : space(&sp), coeffs(Eigen::VectorXd::Zero(sp.n_dofs())) {}
  DGField(const Space& sp, Eigen::VectorXd c) : space(&sp), coeffs(std::move(c)) {}

  Eigen::VectorBlock<Eigen::VectorXd> cell(int c) { return coeffs.segment(c * space->N, space->N); }
  Eigen::VectorBlock<const Eigen::VectorXd> cell(int c) const {
    return coeffs.segment(c * space->N, space->N);
  }
};

/// Function known only by its values at the shared quadrature nodes of every cell.
/// This is where the IEQ auxiliary variable lives between projections.
struct NodalCellFunction {
  const Space* space = nullptr;
  Eigen::VectorXd values;  ///< cell-major, nvol values per cell

  NodalCellFunction() = default;
  explicit NodalCellFunction(const Space& sp)
      : space(&sp), values(Eigen::VectorXd::Zero(sp.mesh.n_cells() * sp.nvol)) {}
  NodalCellFunction(const Space& sp, Eigen::VectorXd v) : space(&sp), values(std::move(v)) {}
};

/// Evaluate a DG coefficient vector at all volume quadrature nodes.
inline Eigen::VectorXd eval_at_nodes(const Space& sp, const Eigen::VectorXd& coeffs) {
  const int L = sp.mesh.n_cells();
  Eigen::VectorXd out(L * sp.nvol);
  for (int c = 0; c < L; ++c) {
    out.segment(c * sp.nvol, sp.nvol).noalias() =
        sp.vol.val.transpose() * coeffs.segment(c * sp.N, sp.N);
  }
  return out;
}

/// Evaluate a spatial function at all volume quadrature nodes.
inline Eigen::VectorXd sample_at_nodes(const Space& sp, const SpatialFn& f) {
  const int L = sp.mesh.n_cells();
  Eigen::VectorXd out(L * sp.nvol);
  for (int c = 0; c < L; ++c) {
    for (int q = 0; q < sp.nvol; ++q) {
      const auto xy = sp.node_xy(c, q);
      out[c * sp.nvol + q] = f(xy[0], xy[1]);
    }
  }
  return out;
}

/// Load vector with entries <g, v_j> under the shared quadrature inner product.
inline Eigen::VectorXd load_vector(const Space& sp, const Eigen::VectorXd& nodal) {
  const int L = sp.mesh.n_cells();
  Eigen::VectorXd out(L * sp.N);
  for (int c = 0; c < L; ++c) {
    out.segment(c * sp.N, sp.N).noalias() =
        sp.jac * (sp.vol.val * sp.wvol.cwiseProduct(nodal.segment(c * sp.nvol, sp.nvol)));
  }
  return out;
}

/// Piecewise L2 projection of nodal values into V_h under the quadrature inner product.
inline Eigen::VectorXd project_nodal(const Space& sp, const Eigen::VectorXd& nodal) {
  const int L = sp.mesh.n_cells();
  Eigen::VectorXd out(L * sp.N);
  for (int c = 0; c < L; ++c) {
    // The volume Jacobian cancels between <f, v_l> and <v_l, v_l>.
    out.segment(c * sp.N, sp.N).noalias() =
        (sp.vol.val * sp.wvol.cwiseProduct(nodal.segment(c * sp.nvol, sp.nvol)))
            .cwiseQuotient(sp.mass_ref);
  }
  return out;
}

/// Piecewise L2 projection of a spatial function; rejects non-finite samples.
inline DGField project(const Space& sp, const SpatialFn& f) {
  Eigen::VectorXd nodal = sample_at_nodes(sp, f);
  for (int c = 0; c < sp.mesh.n_cells(); ++c) {
    for (int q = 0; q < sp.nvol; ++q) {
      const double v = nodal[c * sp.nvol + q];
      if (!std::isfinite(v)) {
        const auto xy = sp.node_xy(c, q);
        throw NumericError("project: non-finite value at cell " + std::to_string(c) + " node " +
                           std::to_string(q) + " (x=" + std::to_string(xy[0]) +
                           ", y=" + std::to_string(xy[1]) + ")");
      }
    }
  }
  return DGField(sp, project_nodal(sp, nodal));
}

inline DGField project(const Space& sp, const NodalCellFunction& f) {
  return DGField(sp, project_nodal(sp, f.values));
}

/// Squared quadrature L2 norm of nodal values.
inline double nodal_l2_sq(const Space& sp, const Eigen::VectorXd& nodal) {
  double s = 0.0;
  for (int c = 0; c < sp.mesh.n_cells(); ++c) {
    s += sp.wvol.dot(nodal.segment(c * sp.nvol, sp.nvol).cwiseAbs2());
  }
  return sp.jac * s;
}

/// Squared quadrature L2 norm of a coefficient vector (u^T M u with M diagonal).
inline double field_l2_sq(const Space& sp, const Eigen::VectorXd& coeffs) {
  double s = 0.0;
  for (int c = 0; c < sp.mesh.n_cells(); ++c) {
    s += sp.mass_ref.dot(coeffs.segment(c * sp.N, sp.N).cwiseAbs2());
  }
  return sp.jac * s;
}

inline double field_l2(const Space& sp, const Eigen::VectorXd& coeffs) {
  return std::sqrt(field_l2_sq(sp, coeffs));
}

/// One-sided trace data of a field at the quadrature nodes of a face.
struct FaceTrace {
  Eigen::VectorXd value;
  Eigen::VectorXd normal_deriv;  ///< along the face normal (interior) or outward (boundary)
};

inline FaceTrace trace_one_sided(const Space& sp, const DGField& u, int cell, CellSide side,
                                 double normal_sign, int axis) {
  const auto& tab = sp.edge[side];
  const auto uc = u.cell(cell);
  FaceTrace t;
  t.value = tab.val.transpose() * uc;
  const auto& dn = (axis == 0) ? tab.dxi : tab.deta;
  t.normal_deriv = (normal_sign * sp.chain(axis)) * (dn.transpose() * uc);
  return t;
}

/// Trace of a field at a boundary face (value and outward normal derivative).
inline FaceTrace trace_boundary(const Space& sp, const DGField& u, const Face& face) {
  if (face.interior) throw ContractViolation("trace_boundary: face is interior");
  return trace_one_sided(sp, u, face.cell1, face_side_of(face, true), face.sign, face.axis);
}

/// Two-sided traces with jump [v] = v|K2 - v|K1 and average {v} on an interior face.
struct JumpAverage {
  Eigen::VectorXd value1, value2;    ///< traces from cell1 / cell2
  Eigen::VectorXd dnormal1, dnormal2;  ///< normal derivatives (along the K1->K2 normal)
  Eigen::VectorXd jump, average;
  Eigen::VectorXd jump_dn, average_dn;
};

inline JumpAverage trace_jump_average(const Space& sp, const DGField& u, const Face& face) {
  if (!face.interior) {
    throw ContractViolation("trace_jump_average: boundary face; use trace_boundary");
  }
  const FaceTrace t1 = trace_one_sided(sp, u, face.cell1, face_side_of(face, true), 1.0, face.axis);
  const FaceTrace t2 = trace_one_sided(sp, u, face.cell2, face_side_of(face, false), 1.0, face.axis);
  JumpAverage ja;
  ja.value1 = t1.value;
  ja.value2 = t2.value;
  ja.dnormal1 = t1.normal_deriv;
  ja.dnormal2 = t2.normal_deriv;
  ja.jump = t2.value - t1.value;
  ja.average = 0.5 * (t1.value + t2.value);
  ja.jump_dn = t2.normal_deriv - t1.normal_deriv;
  ja.average_dn = 0.5 * (t1.normal_deriv + t2.normal_deriv);
  return ja;
}

/// Error sampling convention. Both norms are evaluated per cell on the tensor grid
/// of a Gauss rule of order `gauss_order` (the sampling order G >= k+1 of the error
/// formulas; the reference results use G = 10). With `linf_cell_extrema` the Linf
/// norm additionally samples a uniform per-cell grid that includes the cell corners,
/// where discontinuous-Galerkin errors peak.
struct ErrorSampling {
  int gauss_order = 10;
  bool linf_cell_extrema = false;
  int uniform_points = 5;
};

namespace detail {

/// Evaluate |u - exact| on a per-cell reference grid; accumulates the weighted L2
/// sum when weights are supplied and always tracks the max.
inline void scan_error_grid(const Space& sp, const Eigen::VectorXd& coeffs,
                            const SpatialFn& exact,
                            const std::vector<std::array<double, 2>>& ref_pts,
                            const std::vector<double>* weights, double* l2_sq, double* linf) {
  const BasisTable tab = basis_eval(sp.basis, ref_pts);
  Eigen::VectorXd vals(ref_pts.size());
  for (int c = 0; c < sp.mesh.n_cells(); ++c) {
    vals.noalias() = tab.val.transpose() * coeffs.segment(c * sp.N, sp.N);
    const auto ctr = sp.mesh.cell_center(c);
    for (std::size_t p = 0; p < ref_pts.size(); ++p) {
      const double x = ctr[0] + 0.5 * sp.mesh.hx * ref_pts[p][0];
      const double y = sp.mesh.dim == 2 ? ctr[1] + 0.5 * sp.mesh.hy * ref_pts[p][1] : 0.0;
      const double d = vals[p] - exact(x, y);
      if (weights && l2_sq) *l2_sq += (*weights)[p] * d * d;
      if (linf) *linf = std::max(*linf, std::abs(d));
    }
  }
}

inline void sampling_grids(const Space& sp, const ErrorSampling& es,
                           std::vector<std::array<double, 2>>& gauss_pts,
                           std::vector<double>& gauss_w,
                           std::vector<std::array<double, 2>>& extrema_pts) {
  const QuadratureRule r = gauss_rule(std::max(es.gauss_order, sp.basis.degree + 1));
  if (sp.mesh.dim == 1) {
    for (int a = 0; a < r.order; ++a) {
      gauss_pts.push_back({r.nodes[a], 0.0});
      gauss_w.push_back(r.weights[a]);
    }
  } else {
    for (int b = 0; b < r.order; ++b) {
      for (int a = 0; a < r.order; ++a) {
        gauss_pts.push_back({r.nodes[a], r.nodes[b]});
        gauss_w.push_back(r.weights[a] * r.weights[b]);
      }
    }
  }
  if (!es.linf_cell_extrema) return;
  const int m = std::max(es.uniform_points, 2);
  auto node = [m](int i) { return -1.0 + 2.0 * i / (m - 1); };
  if (sp.mesh.dim == 1) {
    for (int i = 0; i < m; ++i) extrema_pts.push_back({node(i), 0.0});
  } else {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) extrema_pts.push_back({node(j), node(i)});
    }
  }
}

}  // namespace detail

/// L2 and Linf errors against an exact function under the given sampling convention.
inline std::pair<double, double> error_norms(const Space& sp, const DGField& u,
                                             const SpatialFn& exact,
                                             const ErrorSampling& es = {}) {
  std::vector<std::array<double, 2>> gauss_pts, extrema_pts;
  std::vector<double> gauss_w;
  detail::sampling_grids(sp, es, gauss_pts, gauss_w, extrema_pts);
  double l2 = 0.0, linf = 0.0;
  detail::scan_error_grid(sp, u.coeffs, exact, gauss_pts, &gauss_w, &l2, &linf);
  if (!extrema_pts.empty()) {
    detail::scan_error_grid(sp, u.coeffs, exact, extrema_pts, nullptr, nullptr, &linf);
  }
  return {std::sqrt(sp.jac * l2), linf};
}

/// L2 and Linf norms of the difference of two coefficient vectors on one space,
/// under the same sampling convention (used against fine-step reference solutions).
inline std::pair<double, double> field_diff_norms(const Space& sp, const Eigen::VectorXd& a,
                                                  const Eigen::VectorXd& b,
                                                  const ErrorSampling& es = {}) {
  std::vector<std::array<double, 2>> gauss_pts, extrema_pts;
  std::vector<double> gauss_w;
  detail::sampling_grids(sp, es, gauss_pts, gauss_w, extrema_pts);
  const Eigen::VectorXd diff = a - b;
  auto zero = [](double, double) { return 0.0; };
  double l2 = 0.0, linf = 0.0;
  detail::scan_error_grid(sp, diff, zero, gauss_pts, &gauss_w, &l2, &linf);
  if (!extrema_pts.empty()) {
    detail::scan_error_grid(sp, diff, zero, extrema_pts, nullptr, nullptr, &linf);
  }
  return {std::sqrt(sp.jac * l2), linf};
}

/// Experimental orders of convergence: order_j = log2(e_j / e_{j+1}).
inline std::vector<double> eoc(const std::vector<double>& errors) {
  if (errors.size() < 2) throw NumericError("eoc: need at least two error entries");
  std::vector<double> orders;
  for (std::size_t j = 0; j + 1 < errors.size(); ++j) {
    if (!(errors[j] > 0.0) || !(errors[j + 1] > 0.0)) {
      throw NumericError("eoc: error entries must be positive");
    }
    orders.push_back(std::log2(errors[j] / errors[j + 1]));
  }
  return orders;
}

}  // namespace ieqdg
