// Independent oracles for the unit tests. Basis values come from std::legendre
// (not the library recurrence); assembly oracles integrate the bilinear-form and
// load formulas directly, face by face, with their own bookkeeping.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "ieqdg/ieqdg.hpp"

namespace oracle {

inline double legendre_value(int n, double x) { return std::legendre(n, x); }

inline double legendre_derivative(int n, double x) {
  if (n == 0) return 0.0;
  if (std::abs(std::abs(x) - 1.0) < 1e-14) {
    const double sgn = x > 0 ? 1.0 : ((n % 2 == 1) ? 1.0 : -1.0);
    return sgn * 0.5 * n * (n + 1.0);
  }
  return n * (x * std::legendre(n, x) - std::legendre(n - 1, x)) / (x * x - 1.0);
}

/// Basis function of the given mode on cell c, evaluated at a physical point.
struct CellBasis {
  const ieqdg::Mesh* mesh;
  const ieqdg::ReferenceBasis* basis;

  double value(int c, int mode, double x, double y) const {
    const auto ctr = mesh->cell_center(c);
    const double xi = 2.0 * (x - ctr[0]) / mesh->hx;
    const auto [mx, my] = basis->modes[mode];
    double v = legendre_value(mx, xi);
    if (mesh->dim == 2) v *= legendre_value(my, 2.0 * (y - ctr[1]) / mesh->hy);
    return v;
  }

  double dx(int c, int mode, double x, double y) const {
    const auto ctr = mesh->cell_center(c);
    const double xi = 2.0 * (x - ctr[0]) / mesh->hx;
    const auto [mx, my] = basis->modes[mode];
    double v = legendre_derivative(mx, xi) * 2.0 / mesh->hx;
    if (mesh->dim == 2) v *= legendre_value(my, 2.0 * (y - ctr[1]) / mesh->hy);
    return v;
  }

  double dy(int c, int mode, double x, double y) const {
    const auto ctr = mesh->cell_center(c);
    const double eta = 2.0 * (y - ctr[1]) / mesh->hy;
    const auto [mx, my] = basis->modes[mode];
    return legendre_value(mx, 2.0 * (x - ctr[0]) / mesh->hx) * legendre_derivative(my, eta) * 2.0 /
           mesh->hy;
  }
};

/// Gauss points of a face in physical coordinates plus the tangential jacobian.
struct FaceQuad {
  std::vector<std::array<double, 2>> pts;
  std::vector<double> w;  ///< includes the tangential jacobian
};

inline FaceQuad face_quad(const ieqdg::Mesh& mesh, const ieqdg::Face& f, int order) {
  FaceQuad fq;
  if (mesh.dim == 1) {
    const auto ctr = mesh.cell_center(f.cell1);
    const double x = f.interior ? ctr[0] + mesh.hx / 2
                                : ctr[0] + f.sign * mesh.hx / 2;
    fq.pts.push_back({x, 0.0});
    fq.w.push_back(1.0);
    return fq;
  }
  const auto rule = ieqdg::gauss_rule(order);
  const auto ctr = mesh.cell_center(f.cell1);
  for (int q = 0; q < order; ++q) {
    const double t = rule.nodes[q];
    double x, y;
    if (f.axis == 0) {
      x = f.interior ? ctr[0] + mesh.hx / 2 : ctr[0] + f.sign * mesh.hx / 2;
      y = ctr[1] + t * mesh.hy / 2;
      fq.w.push_back(rule.weights[q] * mesh.hy / 2);
    } else {
      x = ctr[0] + t * mesh.hx / 2;
      y = f.interior ? ctr[1] + mesh.hy / 2 : ctr[1] + f.sign * mesh.hy / 2;
      fq.w.push_back(rule.weights[q] * mesh.hx / 2);
    }
    fq.pts.push_back({x, y});
  }
  return fq;
}

/// Dense assembly of A(v_l, v_j) = A0 + Ab directly from the unified formulas.
inline Eigen::MatrixXd dense_A(const ieqdg::Mesh& mesh, const ieqdg::ReferenceBasis& basis,
                               double a, const ieqdg::BCSpec& bc, int vol_order = 10) {
  const int N = basis.size();
  const int L = mesh.n_cells();
  const int n = L * N;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  CellBasis cb{&mesh, &basis};
  const auto rule = ieqdg::gauss_rule(vol_order);

  // Volume term: grad(w).grad(v) - a/2 w v, cell by cell.
  for (int c = 0; c < L; ++c) {
    const auto ctr = mesh.cell_center(c);
    for (int j = 0; j < N; ++j) {
      for (int l = 0; l < N; ++l) {
        double s = 0.0;
        for (int qa = 0; qa < vol_order; ++qa) {
          const double x = ctr[0] + rule.nodes[qa] * mesh.hx / 2;
          if (mesh.dim == 1) {
            const double wq = rule.weights[qa] * mesh.hx / 2;
            s += wq * (cb.dx(c, l, x, 0) * cb.dx(c, j, x, 0) -
                       0.5 * a * cb.value(c, l, x, 0) * cb.value(c, j, x, 0));
            continue;
          }
          for (int qb = 0; qb < vol_order; ++qb) {
            const double y = ctr[1] + rule.nodes[qb] * mesh.hy / 2;
            const double wq = rule.weights[qa] * rule.weights[qb] * mesh.hx * mesh.hy / 4;
            s += wq * (cb.dx(c, l, x, y) * cb.dx(c, j, x, y) +
                       cb.dy(c, l, x, y) * cb.dy(c, j, x, y) -
                       0.5 * a * cb.value(c, l, x, y) * cb.value(c, j, x, y));
          }
        }
        A(c * N + j, c * N + l) += s;
      }
    }
  }

  // Face terms.
  for (const auto& f : mesh.faces) {
    const FaceQuad fq = face_quad(mesh, f, vol_order);
    auto dn = [&](int c, int mode, double x, double y) {
      return f.axis == 0 ? cb.dx(c, mode, x, y) : cb.dy(c, mode, x, y);
    };
    if (f.interior) {
      // {dn w}[v] + [w]{dn v} with [v] = v|K2 - v|K1 and the normal from K1 to K2.
      const int cells[2] = {f.cell1, f.cell2};
      const double sigma[2] = {-1.0, 1.0};
      for (int sw = 0; sw < 2; ++sw) {
        for (int sv = 0; sv < 2; ++sv) {
          for (int j = 0; j < N; ++j) {
            for (int l = 0; l < N; ++l) {
              double s = 0.0;
              for (std::size_t q = 0; q < fq.pts.size(); ++q) {
                const auto [x, y] = fq.pts[q];
                s += fq.w[q] * (0.5 * dn(cells[sw], l, x, y) * sigma[sv] * cb.value(cells[sv], j, x, y) +
                                sigma[sw] * cb.value(cells[sw], l, x, y) * 0.5 * dn(cells[sv], j, x, y));
              }
              A(cells[sv] * N + j, cells[sw] * N + l) += s;
            }
          }
        }
      }
      continue;
    }
    const int c = f.cell1;
    for (int j = 0; j < N; ++j) {
      for (int l = 0; l < N; ++l) {
        double s = 0.0;
        for (std::size_t q = 0; q < fq.pts.size(); ++q) {
          const auto [x, y] = fq.pts[q];
          const double w = cb.value(c, l, x, y), v = cb.value(c, j, x, y);
          const double dnw = f.sign * dn(c, l, x, y), dnv = f.sign * dn(c, j, x, y);
          switch (bc.family) {
            case ieqdg::BCFamily::clamped:
              s += fq.w[q] * (-w * dnv);
              break;
            case ieqdg::BCFamily::simply_supported:
              s += fq.w[q] * (bc.beta0 / f.boundary_h * w * v - w * dnv - dnw * v);
              break;
            default:
              break;
          }
        }
        A(c * N + j, c * N + l) += s;
      }
    }
  }
  return A;
}

/// Dense boundary loads L1/L2 from the per-family formulas; uses the given face
/// quadrature order (the contract is the G-point Gauss sum).
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> dense_loads(const ieqdg::Mesh& mesh,
                                                               const ieqdg::ReferenceBasis& basis,
                                                               double a, const ieqdg::BCSpec& bc,
                                                               double t, int face_order) {
  const int N = basis.size();
  const int n = mesh.n_cells() * N;
  Eigen::VectorXd l1 = Eigen::VectorXd::Zero(n), l2 = Eigen::VectorXd::Zero(n);
  CellBasis cb{&mesh, &basis};
  for (const auto& f : mesh.faces) {
    if (f.interior) continue;
    const FaceQuad fq = face_quad(mesh, f, face_order);
    const int c = f.cell1;
    const double nx = f.axis == 0 ? f.sign : 0.0;
    const double ny = f.axis == 1 ? f.sign : 0.0;
    auto dn = [&](int mode, double x, double y) {
      return f.axis == 0 ? f.sign * cb.dx(c, mode, x, y) : f.sign * cb.dy(c, mode, x, y);
    };
    for (int j = 0; j < N; ++j) {
      for (std::size_t q = 0; q < fq.pts.size(); ++q) {
        const auto [x, y] = fq.pts[q];
        const double v = cb.value(c, j, x, y);
        const double dnv = dn(j, x, y);
        const double w = fq.w[q];
        switch (bc.family) {
          case ieqdg::BCFamily::clamped: {
            const double g1 = bc.g1(x, y, t, nx, ny), g2 = bc.g2(x, y, t, nx, ny);
            l1[c * N + j] += w * bc.beta1 / f.boundary_h * g1 * v;
            l2[c * N + j] += w * (g1 * dnv - g2 * v);
            break;
          }
          case ieqdg::BCFamily::simply_supported: {
            const double g1 = bc.g1(x, y, t, nx, ny), g3 = bc.g3(x, y, t, nx, ny);
            const double sgl = g3 + 0.5 * a * g1;
            l1[c * N + j] += w * (sgl * dnv - bc.beta0 / f.boundary_h * sgl * v);
            l2[c * N + j] += w * (-g1 * dnv - bc.beta0 / f.boundary_h * g1 * v);
            break;
          }
          case ieqdg::BCFamily::gen_neumann: {
            const double g2 = bc.g2(x, y, t, nx, ny), g4 = bc.g4(x, y, t, nx, ny);
            l1[c * N + j] += -w * (g4 + 0.5 * a * g2) * v;
            l2[c * N + j] += -w * g2 * v;
            break;
          }
          default:
            break;
        }
      }
    }
  }
  return {l1, l2};
}

}  // namespace oracle
