#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "ieqdg/basis.hpp"
#include "ieqdg/quadrature.hpp"
#include "support/oracles.hpp"

using namespace ieqdg;

TEST_CASE("basis sizes and mode ordering") {
  const auto b1 = make_reference_basis(1, 2, BasisSpace::total_degree);
  REQUIRE(b1.size() == 3);

  const auto b2 = make_reference_basis(2, 1, BasisSpace::total_degree);
  REQUIRE(b2.size() == 3);  // {1, xi, eta}
  CHECK(b2.modes[0] == std::array<int, 2>{0, 0});
  CHECK(b2.modes[1] == std::array<int, 2>{1, 0});
  CHECK(b2.modes[2] == std::array<int, 2>{0, 1});

  CHECK(make_reference_basis(2, 3, BasisSpace::total_degree).size() == 10);
  CHECK(make_reference_basis(2, 2, BasisSpace::tensor_product).size() == 9);
}

TEST_CASE("basis_eval values at reference points") {
  const auto b = make_reference_basis(1, 2, BasisSpace::total_degree);
  const auto t = basis_eval(b, {{0.0, 0.0}});
  CHECK(t.val(0, 0) == 1.0);
  CHECK(t.val(1, 0) == 0.0);
  CHECK(t.val(2, 0) == Catch::Approx(-0.5).epsilon(1e-15));

  const auto b2 = make_reference_basis(2, 1, BasisSpace::total_degree);
  const auto t2 = basis_eval(b2, {{0.3, -0.7}});
  CHECK(t2.val(0, 0) == 1.0);
  CHECK(t2.val(1, 0) == Catch::Approx(0.3).epsilon(1e-15));
  CHECK(t2.val(2, 0) == Catch::Approx(-0.7).epsilon(1e-15));
}

TEST_CASE("basis_eval matches an independent Legendre implementation") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (const auto space : {BasisSpace::total_degree, BasisSpace::tensor_product}) {
    const auto b = make_reference_basis(2, 3, space);
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < 12; ++i) pts.push_back({dist(rng), dist(rng)});
    const auto t = basis_eval(b, pts);
    for (int l = 0; l < b.size(); ++l) {
      const auto [mx, my] = b.modes[l];
      for (std::size_t p = 0; p < pts.size(); ++p) {
        const double ref =
            oracle::legendre_value(mx, pts[p][0]) * oracle::legendre_value(my, pts[p][1]);
        CHECK(t.val(l, p) == Catch::Approx(ref).margin(1e-13));
      }
    }
  }
}

TEST_CASE("reference mass diagonal") {
  const auto b1 = make_reference_basis(1, 1, BasisSpace::total_degree);
  const auto m1 = reference_mass_diagonal(b1);
  CHECK(m1[0] == Catch::Approx(2.0).epsilon(1e-15));
  CHECK(m1[1] == Catch::Approx(2.0 / 3.0).epsilon(1e-15));

  const auto b2 = make_reference_basis(2, 2, BasisSpace::total_degree);
  const auto m2 = reference_mass_diagonal(b2);
  CHECK(m2[0] == Catch::Approx(4.0).epsilon(1e-15));  // constant mode (s,tau)=(1,1)
  // Mode with per-axis degrees (1,2): 1-based (s,tau)=(2,3) -> 4/15.
  for (int l = 0; l < b2.size(); ++l) {
    if (b2.modes[l] == std::array<int, 2>{1, 2}) {
      CHECK(m2[l] == Catch::Approx(4.0 / 15.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("discrete orthogonality under the k+1 rule") {
  for (int dim : {1, 2}) {
    for (int k = 0; k <= 3; ++k) {
      for (const auto space : {BasisSpace::total_degree, BasisSpace::tensor_product}) {
        const auto b = make_reference_basis(dim, k, space);
        const auto rule = gauss_rule(k + 1);
        std::vector<std::array<double, 2>> pts;
        std::vector<double> w;
        if (dim == 1) {
          for (int i = 0; i < rule.order; ++i) {
            pts.push_back({rule.nodes[i], 0.0});
            w.push_back(rule.weights[i]);
          }
        } else {
          for (int jy = 0; jy < rule.order; ++jy) {
            for (int jx = 0; jx < rule.order; ++jx) {
              pts.push_back({rule.nodes[jx], rule.nodes[jy]});
              w.push_back(rule.weights[jx] * rule.weights[jy]);
            }
          }
        }
        const auto t = basis_eval(b, pts);
        const auto diag = reference_mass_diagonal(b);
        for (int i = 0; i < b.size(); ++i) {
          for (int j = 0; j < b.size(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < pts.size(); ++p) s += w[p] * t.val(i, p) * t.val(j, p);
            if (i == j) {
              CHECK(s == Catch::Approx(diag[i]).epsilon(1e-13));
            } else {
              CHECK(std::abs(s) < 1e-12);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("gradient tables match finite differences") {
  const double delta = 1e-6;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-0.9, 0.9);
  const auto b = make_reference_basis(2, 3, BasisSpace::total_degree);
  for (int trial = 0; trial < 20; ++trial) {
    const double xi = dist(rng), eta = dist(rng);
    const auto t = basis_eval(b, {{xi, eta},
                                  {xi + delta, eta},
                                  {xi - delta, eta},
                                  {xi, eta + delta},
                                  {xi, eta - delta}});
    for (int l = 0; l < b.size(); ++l) {
      const double fd_xi = (t.val(l, 1) - t.val(l, 2)) / (2 * delta);
      const double fd_eta = (t.val(l, 3) - t.val(l, 4)) / (2 * delta);
      CHECK(t.dxi(l, 0) == Catch::Approx(fd_xi).margin(1e-5));
      CHECK(t.deta(l, 0) == Catch::Approx(fd_eta).margin(1e-5));
    }
  }
}
