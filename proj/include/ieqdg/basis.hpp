// Orthogonal modal bases on the reference element [-1,1]^d built from Legendre polynomials.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "ieqdg/errors.hpp"

namespace ieqdg {

enum class BasisSpace { total_degree, tensor_product };

/// Modal basis on [-1,1]^d. Mode l is P_{dx}(xi) * P_{dy}(eta); the constant mode comes first.
struct ReferenceBasis {
  int dim = 2;
  int degree = 1;
  BasisSpace space = BasisSpace::total_degree;
  std::vector<std::array<int, 2>> modes;  ///< per-axis Legendre degrees (dy = 0 in 1D)

  int size() const { return static_cast<int>(modes.size()); }
};

/// Basis values and reference-coordinate gradients at a list of points; (l, p) indexed.
struct BasisTable {
  Eigen::MatrixXd val;
  Eigen::MatrixXd dxi;
  Eigen::MatrixXd deta;  ///< zero matrix in 1D
};

inline ReferenceBasis make_reference_basis(int dim, int degree, BasisSpace space) {
  if (dim != 1 && dim != 2) throw ConfigError("basis: dim must be 1 or 2");
  if (degree < 0) throw ConfigError("basis: degree must be non-negative");
  ReferenceBasis b;
  b.dim = dim;
  b.degree = degree;
  b.space = space;
  if (dim == 1) {
    for (int d = 0; d <= degree; ++d) b.modes.push_back({d, 0});
  } else {
    // Ordered by total degree, x-degree first within a level: {1, xi, eta, xi^2, xi*eta, ...}.
    const int dmax = (space == BasisSpace::total_degree) ? degree : 2 * degree;
    for (int d = 0; d <= dmax; ++d) {
      for (int dx = d; dx >= 0; --dx) {
        const int dy = d - dx;
        if (space == BasisSpace::tensor_product && (dx > degree || dy > degree)) continue;
        b.modes.push_back({dx, dy});
      }
    }
  }
  return b;
}

namespace detail {

/// Values and derivatives of P_0..P_k at the given points; tables are (k+1) x npts.
inline void legendre_table(int k, const Eigen::VectorXd& x, Eigen::MatrixXd& val,
                           Eigen::MatrixXd& der) {
  const int n = static_cast<int>(x.size());
  val.resize(k + 1, n);
  der.resize(k + 1, n);
  for (int p = 0; p < n; ++p) {
    val(0, p) = 1.0;
    der(0, p) = 0.0;
    if (k >= 1) {
      val(1, p) = x[p];
      der(1, p) = 1.0;
    }
    for (int j = 1; j < k; ++j) {
      val(j + 1, p) = ((2.0 * j + 1.0) * x[p] * val(j, p) - j * val(j - 1, p)) / (j + 1.0);
      // P'_{n+1} = P'_{n-1} + (2n+1) P_n
      der(j + 1, p) = der(j - 1, p) + (2.0 * j + 1.0) * val(j, p);
    }
  }
}

}  // namespace detail

/// Evaluate all basis functions (values and reference gradients) at reference points.
/// In 2D `points` holds (xi, eta) pairs; in 1D the second coordinate is ignored.
inline BasisTable basis_eval(const ReferenceBasis& basis,
                             const std::vector<std::array<double, 2>>& points) {
  const int np = static_cast<int>(points.size());
  const int k = basis.degree;
  Eigen::VectorXd xs(np), ys(np);
  for (int p = 0; p < np; ++p) {
    xs[p] = points[p][0];
    ys[p] = points[p][1];
  }
  Eigen::MatrixXd vx, dx, vy, dy;
  detail::legendre_table(k, xs, vx, dx);
  detail::legendre_table(k, ys, vy, dy);

  BasisTable t;
  const int N = basis.size();
  t.val.resize(N, np);
  t.dxi.resize(N, np);
  t.deta = Eigen::MatrixXd::Zero(N, np);
  for (int l = 0; l < N; ++l) {
    const auto [mx, my] = basis.modes[l];
    for (int p = 0; p < np; ++p) {
      if (basis.dim == 1) {
        t.val(l, p) = vx(mx, p);
        t.dxi(l, p) = dx(mx, p);
      } else {
        t.val(l, p) = vx(mx, p) * vy(my, p);
        t.dxi(l, p) = dx(mx, p) * vy(my, p);
        t.deta(l, p) = vx(mx, p) * dy(my, p);
      }
    }
  }
  return t;
}

/// L2([-1,1]^d) norms squared of the basis functions: prod_axis 2/(2*deg+1).
inline Eigen::VectorXd reference_mass_diagonal(const ReferenceBasis& basis) {
  Eigen::VectorXd m(basis.size());
  for (int l = 0; l < basis.size(); ++l) {
    const auto [mx, my] = basis.modes[l];
    double v = 2.0 / (2.0 * mx + 1.0);
    if (basis.dim == 2) v *= 2.0 / (2.0 * my + 1.0);
    m[l] = v;
  }
  return m;
}

}  // namespace ieqdg
