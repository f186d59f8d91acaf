#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "ieqdg/field.hpp"

using namespace ieqdg;

namespace {
Space make_2d(int n, int k, BoundaryKind kind = BoundaryKind::physical, double lo = -2 * M_PI,
              double hi = 2 * M_PI) {
  return make_space(build_rect_mesh(2, lo, hi, lo, hi, n, n, kind), k,
                    BasisSpace::total_degree);
}
}  // namespace

TEST_CASE("projection of a constant hits the constant mode only") {
  const Space sp = make_2d(4, 2);
  const DGField f = project(sp, [](double, double) { return 1.0; });
  for (int c = 0; c < sp.mesh.n_cells(); ++c) {
    CHECK(f.coeffs[c * sp.N] == Catch::Approx(1.0).epsilon(1e-14));
    for (int l = 1; l < sp.N; ++l) CHECK(std::abs(f.coeffs[c * sp.N + l]) < 1e-14);
  }
}

TEST_CASE("projection reproduces members of V_h exactly") {
  const Space sp = make_space(build_rect_mesh(1, -1, 1, 0, 0, 1, 1, BoundaryKind::physical), 1,
                              BasisSpace::total_degree);
  const DGField f = project(sp, [](double x, double) { return x; });
  const Eigen::VectorXd nodal = eval_at_nodes(sp, f.coeffs);
  for (int q = 0; q < sp.nvol; ++q) {
    const auto xy = sp.node_xy(0, q);
    CHECK(nodal[q] == Catch::Approx(xy[0]).margin(1e-13));
  }
}

TEST_CASE("projection error decays at order k+1 (refinement ratio about 8 for k=2)") {
  auto f = [](double x, double y) { return std::sin(x / 2) * std::sin(y / 2); };
  double prev = 0.0;
  std::vector<double> errs;
  for (int n : {8, 16}) {
    const Space sp = make_2d(n, 2);
    const DGField p = project(sp, f);
    errs.push_back(error_norms(sp, p, f).first);
    (void)prev;
  }
  const double ratio = errs[0] / errs[1];
  CHECK(ratio > 7.2);
  CHECK(ratio < 8.8);
}

TEST_CASE("projection rejects non-finite samples with location info") {
  const Space sp = make_2d(2, 1, BoundaryKind::physical, 0.0, 1.0);
  CHECK_THROWS_AS(project(sp, [](double x, double) { return x > 0.7 ? NAN : 0.0; }), NumericError);
}

TEST_CASE("projection is idempotent, linear, and a quadrature-norm contraction") {
  const Space sp = make_2d(4, 2);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd nodal(sp.mesh.n_cells() * sp.nvol);
    Eigen::VectorXd nodal2(nodal.size());
    for (int i = 0; i < nodal.size(); ++i) {
      nodal[i] = dist(rng);
      nodal2[i] = dist(rng);
    }
    const Eigen::VectorXd p = project_nodal(sp, nodal);
    // Idempotence: projecting the projection (sampled at nodes) returns it.
    const Eigen::VectorXd pp = project_nodal(sp, eval_at_nodes(sp, p));
    CHECK((pp - p).lpNorm<Eigen::Infinity>() < 1e-13 * std::max(1.0, p.lpNorm<Eigen::Infinity>()));
    // Contraction in the quadrature norm.
    CHECK(field_l2_sq(sp, p) <= nodal_l2_sq(sp, nodal) * (1 + 1e-13));
    // Linearity.
    const Eigen::VectorXd pa = project_nodal(sp, Eigen::VectorXd(2.5 * nodal - 0.75 * nodal2));
    const Eigen::VectorXd pb = 2.5 * project_nodal(sp, nodal) - 0.75 * project_nodal(sp, nodal2);
    CHECK((pa - pb).lpNorm<Eigen::Infinity>() < 1e-13);
  }
}

TEST_CASE("traces, jumps and averages") {
  const Space sp = make_2d(4, 2, BoundaryKind::physical, 0.0, 4.0);
  SECTION("globally constant field") {
    const DGField f = project(sp, [](double, double) { return 3.25; });
    for (const auto& face : sp.mesh.faces) {
      if (!face.interior) continue;
      const auto ja = trace_jump_average(sp, f, face);
      CHECK(ja.jump.lpNorm<Eigen::Infinity>() < 1e-13);
      CHECK((ja.average.array() - 3.25).abs().maxCoeff() < 1e-13);
      CHECK(ja.jump_dn.lpNorm<Eigen::Infinity>() < 1e-13);
    }
  }
  SECTION("field equal to x across a vertical face") {
    const DGField f = project(sp, [](double x, double) { return x; });
    for (const auto& face : sp.mesh.faces) {
      if (!face.interior || face.axis != 0) continue;
      const auto ja = trace_jump_average(sp, f, face);
      CHECK(ja.jump.lpNorm<Eigen::Infinity>() < 1e-12);
      CHECK((ja.average_dn.array() - 1.0).abs().maxCoeff() < 1e-12);
    }
  }
  SECTION("indicator of the downwind cell") {
    for (const auto& face : sp.mesh.faces) {
      if (!face.interior) continue;
      DGField f(sp);
      f.coeffs[face.cell2 * sp.N] = 1.0;
      const auto ja = trace_jump_average(sp, f, face);
      CHECK((ja.jump.array() - 1.0).abs().maxCoeff() < 1e-13);
      CHECK((ja.average.array() - 0.5).abs().maxCoeff() < 1e-13);
      break;
    }
  }
  SECTION("boundary face is a contract violation") {
    const DGField f = project(sp, [](double, double) { return 0.0; });
    for (const auto& face : sp.mesh.faces) {
      if (face.interior) continue;
      CHECK_THROWS_AS(trace_jump_average(sp, f, face), ContractViolation);
      CHECK_NOTHROW(trace_boundary(sp, f, face));
      break;
    }
  }
}

TEST_CASE("error norms vanish for exact members of V_h") {
  const Space sp = make_2d(3, 2, BoundaryKind::physical, 0.0, 3.0);
  auto f = [](double x, double y) { return 1.0 + 0.5 * x - 0.25 * y + 0.125 * x * y; };
  const DGField p = project(sp, f);
  const auto [l2, linf] = error_norms(sp, p, f);
  CHECK(l2 < 1e-13);
  CHECK(linf < 1e-13);
}

TEST_CASE("eoc") {
  CHECK(eoc({0.4, 0.1})[0] == Catch::Approx(2.0).epsilon(1e-14));
  const auto orders = eoc({3.96917e-01, 9.53330e-02});
  CHECK(std::round(orders[0] * 100) / 100 == Catch::Approx(2.06));
  CHECK(eoc({0.7, 0.7})[0] == 0.0);
  CHECK_THROWS_AS(eoc({0.5}), NumericError);
  CHECK_THROWS_AS(eoc({0.5, -0.1}), NumericError);
  CHECK_THROWS_AS(eoc({0.5, 0.0}), NumericError);
}
