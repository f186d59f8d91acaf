// Discrete space bundle: mesh + reference basis + the one shared quadrature rule,
// with basis tables precomputed at volume and edge nodes. Every integral in the
// library (mass, stiffness, nonlinear terms, energies, errors) uses this rule so
// the discrete energy identities hold algebraically.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "ieqdg/basis.hpp"
#include "ieqdg/mesh.hpp"
#include "ieqdg/quadrature.hpp"

namespace ieqdg {

/// Cell edge identifiers in reference coordinates.
enum CellSide { side_xi_minus = 0, side_xi_plus = 1, side_eta_minus = 2, side_eta_plus = 3 };

struct Space {
  Mesh mesh;
  ReferenceBasis basis;
  QuadratureRule rule;

  int N = 0;      ///< basis functions per cell
  int nvol = 0;   ///< volume quadrature nodes per cell (G^dim)
  int nface = 0;  ///< face quadrature nodes (G in 2D, 1 in 1D)
  double jac = 1; ///< volume Jacobian hx*hy/4 (2D) or hx/2 (1D)

  BasisTable vol;                              ///< tables at volume nodes
  std::array<BasisTable, 4> edge;              ///< tables at each reference edge
  Eigen::VectorXd wvol;                        ///< tensor-product weights, size nvol
  Eigen::VectorXd mass_ref;                    ///< reference Gram diagonal
  std::vector<std::array<double, 2>> vol_ref;  ///< reference coordinates of volume nodes

  int n_dofs() const { return mesh.n_cells() * N; }

  /// Physical coordinates of volume node q of cell c.
  std::array<double, 2> node_xy(int c, int q) const {
    const auto ctr = mesh.cell_center(c);
    const auto& r = vol_ref[q];
    return {ctr[0] + 0.5 * mesh.hx * r[0],
            mesh.dim == 2 ? ctr[1] + 0.5 * mesh.hy * r[1] : 0.0};
  }

  /// Physical coordinates of face node q on the given side of cell c.
  std::array<double, 2> face_node_xy(int c, CellSide side, int q) const {
    const auto ctr = mesh.cell_center(c);
    if (mesh.dim == 1) {
      return {ctr[0] + (side == side_xi_plus ? 0.5 : -0.5) * mesh.hx, 0.0};
    }
    const double t = rule.nodes[q];
    switch (side) {
      case side_xi_minus: return {ctr[0] - 0.5 * mesh.hx, ctr[1] + 0.5 * mesh.hy * t};
      case side_xi_plus:  return {ctr[0] + 0.5 * mesh.hx, ctr[1] + 0.5 * mesh.hy * t};
      case side_eta_minus: return {ctr[0] + 0.5 * mesh.hx * t, ctr[1] - 0.5 * mesh.hy};
      default:             return {ctr[0] + 0.5 * mesh.hx * t, ctr[1] + 0.5 * mesh.hy};
    }
  }

  /// Tangential Jacobian of a face (ds = face_jac * dt); 1 in 1D.
  double face_jac(int axis) const {
    if (mesh.dim == 1) return 1.0;
    return 0.5 * (axis == 0 ? mesh.hy : mesh.hx);
  }

  /// Chain-rule factor for the physical derivative along the given axis.
  double chain(int axis) const { return 2.0 / (axis == 0 ? mesh.hx : mesh.hy); }
};

/// Assemble the shared-space bundle; the quadrature order must be >= k+1 so that
/// the quadrature Gram matrix of the basis is (exactly) the diagonal L2 Gram.
inline Space make_space(const Mesh& mesh, int degree, BasisSpace basis_space,
                        int quad_order = 0) {
  const int G = quad_order > 0 ? quad_order : degree + 1;
  if (G < degree + 1) {
    throw ConfigError("make_space: quadrature order must be at least degree+1");
  }
  Space sp;
  sp.mesh = mesh;
  sp.basis = make_reference_basis(mesh.dim, degree, basis_space);
  sp.rule = gauss_rule(G);
  sp.N = sp.basis.size();
  sp.nface = (mesh.dim == 2) ? G : 1;
  sp.nvol = (mesh.dim == 2) ? G * G : G;
  sp.jac = (mesh.dim == 2) ? mesh.hx * mesh.hy / 4.0 : mesh.hx / 2.0;

  // Volume nodes: index q = beta*G + alpha; alpha runs over xi (x fastest).
  sp.vol_ref.resize(sp.nvol);
  sp.wvol.resize(sp.nvol);
  if (mesh.dim == 2) {
    for (int beta = 0; beta < G; ++beta) {
      for (int alpha = 0; alpha < G; ++alpha) {
        sp.vol_ref[beta * G + alpha] = {sp.rule.nodes[alpha], sp.rule.nodes[beta]};
        sp.wvol[beta * G + alpha] = sp.rule.weights[alpha] * sp.rule.weights[beta];
      }
    }
  } else {
    for (int alpha = 0; alpha < G; ++alpha) {
      sp.vol_ref[alpha] = {sp.rule.nodes[alpha], 0.0};
      sp.wvol[alpha] = sp.rule.weights[alpha];
    }
  }
  sp.vol = basis_eval(sp.basis, sp.vol_ref);

  auto edge_points = [&](CellSide side) {
    std::vector<std::array<double, 2>> pts;
    if (mesh.dim == 1) {
      pts.push_back({side == side_xi_plus ? 1.0 : -1.0, 0.0});
      return pts;
    }
    for (int q = 0; q < G; ++q) {
      const double t = sp.rule.nodes[q];
      switch (side) {
        case side_xi_minus: pts.push_back({-1.0, t}); break;
        case side_xi_plus:  pts.push_back({1.0, t}); break;
        case side_eta_minus: pts.push_back({t, -1.0}); break;
        default:             pts.push_back({t, 1.0}); break;
      }
    }
    return pts;
  };
  const int n_sides = (mesh.dim == 2) ? 4 : 2;
  for (int s = 0; s < n_sides; ++s) {
    sp.edge[s] = basis_eval(sp.basis, edge_points(static_cast<CellSide>(s)));
  }
  sp.mass_ref = reference_mass_diagonal(sp.basis);
  return sp;
}

/// The cell sides adjacent to a face: (side of cell1, side of cell2) for interior
/// faces, or the single exposed side for boundary faces.
inline CellSide face_side_of(const Face& f, bool first_cell) {
  if (f.axis == 0) {
    if (!f.interior) return f.sign > 0 ? side_xi_plus : side_xi_minus;
    return first_cell ? side_xi_plus : side_xi_minus;
  }
  if (!f.interior) return f.sign > 0 ? side_eta_plus : side_eta_minus;
  return first_cell ? side_eta_plus : side_eta_minus;
}

}  // namespace ieqdg
