// Uniform rectangular meshes (1D interval / 2D box) with oriented faces and periodic pairing.

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ieqdg/errors.hpp"

namespace ieqdg {

enum class BoundaryKind { physical, periodic };

/// A mesh face. Interior faces are oriented from cell1 to cell2 along +axis;
/// boundary faces reference one cell and carry the outward normal sign.
struct Face {
  bool interior = true;
  int axis = 0;        ///< 0 = x-normal, 1 = y-normal
  int cell1 = -1;      ///< upwind cell (interior) or the adjacent cell (boundary)
  int cell2 = -1;      ///< downwind cell; -1 on boundary faces
  double sign = 1.0;   ///< outward normal sign for boundary faces; +1 on interior faces
  double boundary_h = 0.0;  ///< distance from cell center to the domain boundary (boundary only)
};

struct Mesh {
  int dim = 2;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  int nx = 1, ny = 1;
  BoundaryKind boundary = BoundaryKind::physical;
  double hx = 1, hy = 1;
  std::vector<Face> faces;
  int n_interior_faces = 0;
  int n_boundary_faces = 0;

  int n_cells() const { return nx * ny; }
  int cell_index(int ix, int iy) const { return iy * nx + ix; }
  std::array<int, 2> cell_coords(int c) const { return {c % nx, c / nx}; }
  std::array<double, 2> cell_center(int c) const {
    const auto [ix, iy] = cell_coords(c);
    return {x0 + (ix + 0.5) * hx, dim == 2 ? y0 + (iy + 0.5) * hy : 0.0};
  }
  double cell_volume() const { return dim == 2 ? hx * hy : hx; }
  double volume() const { return cell_volume() * n_cells(); }

  /// Neighbor cell index across the given axis/direction, wrapping when periodic.
  /// Returns -1 at a physical boundary.
  int neighbor(int c, int axis, int dir) const {
    auto [ix, iy] = cell_coords(c);
    int& v = (axis == 0) ? ix : iy;
    const int n = (axis == 0) ? nx : ny;
    v += dir;
    if (v < 0 || v >= n) {
      if (boundary == BoundaryKind::physical) return -1;
      v = (v + n) % n;
    }
    return cell_index(ix, iy);
  }
};

/// Build a uniform rectangular mesh of a 1D interval or 2D axis-aligned box.
/// Cells are ordered lexicographically by (row, column); faces list all x-normal
/// faces then all y-normal faces, interior before boundary, each lexicographically.
inline Mesh build_rect_mesh(int dim, double x0, double x1, double y0, double y1, int nx, int ny,
                            BoundaryKind boundary) {
  if (dim != 1 && dim != 2) throw ConfigError("build_rect_mesh: dim must be 1 or 2");
  if (nx < 1 || (dim == 2 && ny < 1)) throw ConfigError("build_rect_mesh: cell counts must be >= 1");
  if (!(x1 > x0) || (dim == 2 && !(y1 > y0))) {
    throw ConfigError("build_rect_mesh: domain box must have positive volume");
  }
  Mesh m;
  m.dim = dim;
  m.x0 = x0;
  m.x1 = x1;
  m.nx = nx;
  m.hx = (x1 - x0) / nx;
  if (dim == 2) {
    m.y0 = y0;
    m.y1 = y1;
    m.ny = ny;
    m.hy = (y1 - y0) / ny;
  } else {
    m.ny = 1;
    m.y0 = 0;
    m.y1 = 1;
    m.hy = 1;
  }
  m.boundary = boundary;

  const int rows = m.ny;
  auto add_interior = [&](int axis, int c1, int c2) {
    m.faces.push_back(Face{true, axis, c1, c2, 1.0, 0.0});
    ++m.n_interior_faces;
  };
  // x-normal interior faces (including the periodic wrap from the last column to the first).
  for (int iy = 0; iy < rows; ++iy) {
    for (int ix = 0; ix + 1 < nx; ++ix) add_interior(0, m.cell_index(ix, iy), m.cell_index(ix + 1, iy));
    if (boundary == BoundaryKind::periodic) add_interior(0, m.cell_index(nx - 1, iy), m.cell_index(0, iy));
  }
  // y-normal interior faces.
  if (dim == 2) {
    for (int iy = 0; iy + 1 < rows; ++iy) {
      for (int ix = 0; ix < nx; ++ix) add_interior(1, m.cell_index(ix, iy), m.cell_index(ix, iy + 1));
    }
    if (boundary == BoundaryKind::periodic) {
      for (int ix = 0; ix < nx; ++ix) add_interior(1, m.cell_index(ix, rows - 1), m.cell_index(ix, 0));
    }
  }
  // Boundary faces: left, right columns; then bottom, top rows.
  if (boundary == BoundaryKind::physical) {
    auto add_boundary = [&](int axis, int c, double sign, double bh) {
      m.faces.push_back(Face{false, axis, c, -1, sign, bh});
      ++m.n_boundary_faces;
    };
    for (int iy = 0; iy < rows; ++iy) add_boundary(0, m.cell_index(0, iy), -1.0, m.hx / 2);
    for (int iy = 0; iy < rows; ++iy) add_boundary(0, m.cell_index(nx - 1, iy), 1.0, m.hx / 2);
    if (dim == 2) {
      for (int ix = 0; ix < nx; ++ix) add_boundary(1, m.cell_index(ix, 0), -1.0, m.hy / 2);
      for (int ix = 0; ix < nx; ++ix) add_boundary(1, m.cell_index(ix, rows - 1), 1.0, m.hy / 2);
    }
  }
  return m;
}

/// Distance from the adjacent cell center to the domain boundary along the face normal.
inline double boundary_distance(const Mesh& mesh, const Face& face) {
  (void)mesh;
  if (face.interior) {
    throw ContractViolation("boundary_distance: face is interior");
  }
  return face.boundary_h;
}

}  // namespace ieqdg
