#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <map>

#include "ieqdg/mesh.hpp"

using namespace ieqdg;

TEST_CASE("rectangular mesh counts, spec examples") {
  const Mesh m1 = build_rect_mesh(2, 0, 1, 0, 1, 2, 2, BoundaryKind::physical);
  CHECK(m1.n_cells() == 4);
  CHECK(m1.n_interior_faces == 4);
  CHECK(m1.n_boundary_faces == 8);

  const double pi = M_PI;
  const Mesh m2 = build_rect_mesh(2, -2 * pi, 2 * pi, -2 * pi, 2 * pi, 8, 8, BoundaryKind::periodic);
  CHECK(m2.n_interior_faces == 128);
  CHECK(m2.n_boundary_faces == 0);

  const Mesh m3 = build_rect_mesh(1, 0, 4, 0, 0, 20, 1, BoundaryKind::physical);
  CHECK(m3.n_cells() == 20);
  CHECK(m3.n_interior_faces == 19);
  CHECK(m3.n_boundary_faces == 2);
}

TEST_CASE("face/cell count formulas for all counts in [1,64]") {
  for (int nx = 1; nx <= 64; ++nx) {
    for (int ny : {1, 2, 7, nx, 64}) {
      const Mesh mp = build_rect_mesh(2, 0, 1, 0, 1, nx, ny, BoundaryKind::physical);
      CHECK(mp.n_cells() == nx * ny);
      CHECK(mp.n_interior_faces == ny * (nx - 1) + nx * (ny - 1));
      CHECK(mp.n_boundary_faces == 2 * (nx + ny));
      const Mesh mw = build_rect_mesh(2, 0, 1, 0, 1, nx, ny, BoundaryKind::periodic);
      CHECK(mw.n_interior_faces == 2 * nx * ny);
      CHECK(mw.n_boundary_faces == 0);
    }
  }
}

TEST_CASE("cells tile the domain") {
  const Mesh m = build_rect_mesh(2, -1.5, 2.5, 0.25, 9.75, 13, 7, BoundaryKind::physical);
  double sum = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) sum += m.hx * m.hy;
  const double vol = (2.5 - -1.5) * (9.75 - 0.25);
  CHECK(std::abs(sum - vol) <= 1e-12 * vol);
  CHECK(m.volume() == Catch::Approx(vol).epsilon(1e-13));
}

TEST_CASE("interior faces reference distinct cells; boundary faces one") {
  const Mesh m = build_rect_mesh(2, 0, 1, 0, 1, 5, 3, BoundaryKind::physical);
  for (const auto& f : m.faces) {
    if (f.interior) {
      CHECK(f.cell1 != f.cell2);
      CHECK(f.cell2 >= 0);
    } else {
      CHECK(f.cell2 == -1);
      CHECK(f.boundary_h > 0.0);
    }
  }
}

TEST_CASE("periodic pairing is an involution") {
  const Mesh m = build_rect_mesh(2, 0, 1, 0, 1, 6, 4, BoundaryKind::periodic);
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int axis : {0, 1}) {
      for (int dir : {-1, 1}) {
        const int nb = m.neighbor(c, axis, dir);
        REQUIRE(nb >= 0);
        CHECK(m.neighbor(nb, axis, -dir) == c);
      }
    }
  }
  // Wrap faces connect the last column/row back to the first.
  for (const auto& f : m.faces) {
    REQUIRE(f.interior);
    CHECK(m.neighbor(f.cell1, f.axis, 1) == f.cell2);
    CHECK(m.neighbor(f.cell2, f.axis, -1) == f.cell1);
  }
}

TEST_CASE("signed outward normals sum to zero over each cell") {
  for (const auto kind : {BoundaryKind::physical, BoundaryKind::periodic}) {
    const Mesh m = build_rect_mesh(2, 0, 2, 0, 1, 4, 3, kind);
    std::map<int, std::array<double, 2>> sums;
    for (const auto& f : m.faces) {
      if (f.interior) {
        sums[f.cell1][f.axis] += 1.0;   // outward from cell1 is +axis
        sums[f.cell2][f.axis] -= 1.0;   // outward from cell2 is -axis
      } else {
        sums[f.cell1][f.axis] += f.sign;
      }
    }
    for (int c = 0; c < m.n_cells(); ++c) {
      CHECK(sums[c][0] == 0.0);
      CHECK(sums[c][1] == 0.0);
    }
  }
}

TEST_CASE("boundary_distance") {
  const double pi = M_PI;
  const Mesh m8 = build_rect_mesh(2, 0, 2 * pi, 0, 2 * pi, 8, 8, BoundaryKind::physical);
  for (const auto& f : m8.faces) {
    if (!f.interior && f.axis == 0 && f.sign < 0) {
      CHECK(boundary_distance(m8, f) == Catch::Approx(pi / 8).epsilon(1e-15));
    }
  }
  const Mesh m1d = build_rect_mesh(1, 0, 4, 0, 0, 20, 1, BoundaryKind::physical);
  for (const auto& f : m1d.faces) {
    if (!f.interior && f.sign > 0) {
      CHECK(boundary_distance(m1d, f) == Catch::Approx(0.1).epsilon(1e-15));
    }
  }
  // Anisotropic cells: the distance is taken along the face normal.
  const Mesh ma = build_rect_mesh(2, 0, 1, 0, 3, 4, 3, BoundaryKind::physical);
  for (const auto& f : ma.faces) {
    if (!f.interior && f.axis == 1 && f.sign > 0) {
      CHECK(boundary_distance(ma, f) == Catch::Approx(ma.hy / 2).epsilon(1e-15));
    }
  }
  // Interior face is a contract violation.
  for (const auto& f : ma.faces) {
    if (f.interior) {
      CHECK_THROWS_AS(boundary_distance(ma, f), ContractViolation);
      break;
    }
  }
}

TEST_CASE("invalid configurations are rejected") {
  CHECK_THROWS_AS(build_rect_mesh(2, 0, 1, 0, 1, 0, 2, BoundaryKind::physical), ConfigError);
  CHECK_THROWS_AS(build_rect_mesh(2, 0, 1, 0, 1, 4, -1, BoundaryKind::physical), ConfigError);
  CHECK_THROWS_AS(build_rect_mesh(2, 1, 0, 0, 1, 4, 4, BoundaryKind::physical), ConfigError);
  CHECK_THROWS_AS(build_rect_mesh(2, 0, 1, 1, 1, 4, 4, BoundaryKind::physical), ConfigError);
  CHECK_THROWS_AS(build_rect_mesh(3, 0, 1, 0, 1, 4, 4, BoundaryKind::physical), ConfigError);
}

TEST_CASE("single-cell periodic axis wraps onto itself") {
  const Mesh m = build_rect_mesh(2, 0, 1, 0, 1, 1, 1, BoundaryKind::periodic);
  CHECK(m.n_interior_faces == 2);
  for (const auto& f : m.faces) {
    CHECK(f.cell1 == 0);
    CHECK(f.cell2 == 0);
  }
}
