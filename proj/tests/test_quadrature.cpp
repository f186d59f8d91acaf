#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "ieqdg/quadrature.hpp"

using namespace ieqdg;

TEST_CASE("gauss_rule closed forms") {
  const auto r1 = gauss_rule(1);
  REQUIRE(r1.nodes.size() == 1);
  CHECK(r1.nodes[0] == 0.0);
  CHECK(r1.weights[0] == Catch::Approx(2.0).epsilon(1e-15));

  const auto r2 = gauss_rule(2);
  CHECK(r2.nodes[0] == Catch::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.nodes[1] == Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.weights[0] == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(r2.weights[1] == Catch::Approx(1.0).epsilon(1e-15));

  const auto r3 = gauss_rule(3);
  CHECK(r3.nodes[0] == Catch::Approx(-std::sqrt(3.0 / 5.0)).epsilon(1e-15));
  CHECK(r3.nodes[1] == 0.0);
  CHECK(r3.nodes[2] == Catch::Approx(std::sqrt(3.0 / 5.0)).epsilon(1e-15));
  CHECK(r3.weights[0] == Catch::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(r3.weights[1] == Catch::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(r3.weights[2] == Catch::Approx(5.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("gauss_rule rejects out-of-range orders") {
  CHECK_THROWS_AS(gauss_rule(0), ConfigError);
  CHECK_THROWS_AS(gauss_rule(-2), ConfigError);
  CHECK_THROWS_AS(gauss_rule(17), ConfigError);
}

TEST_CASE("gauss_rule basic structure") {
  for (int G = 1; G <= 16; ++G) {
    const auto r = gauss_rule(G);
    double sum = 0.0;
    for (int i = 0; i < G; ++i) {
      CHECK(r.weights[i] > 0.0);
      if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
      CHECK(std::abs(r.nodes[i]) <= 1.0);
      sum += r.weights[i];
    }
    CHECK(sum == Catch::Approx(2.0).epsilon(1e-14));
  }
}

namespace {
double integrate_monomial(const QuadratureRule& r, int m) {
  double s = 0.0;
  for (int i = 0; i < r.order; ++i) s += r.weights[i] * std::pow(r.nodes[i], m);
  return s;
}
}  // namespace

TEST_CASE("quadrature exactness sweep and sharpness") {
  for (int G = 1; G <= 8; ++G) {
    const auto r = gauss_rule(G);
    for (int m = 0; m <= 2 * G - 1; ++m) {
      const double exact = (m % 2 == 1) ? 0.0 : 2.0 / (m + 1.0);
      const double err = std::abs(integrate_monomial(r, m) - exact);
      CHECK(err <= 1e-13 * std::max(1.0, std::abs(exact)));
    }
    // Sharpness at m = 2G: the rule must not be exact one degree past its design
    // order. The Gauss error constant for x^{2G} decays with G (about 4.6e-5 at
    // G = 8), so the uniform bound is 1e-5, with 1e-3 holding through G = 5.
    const double exact = 2.0 / (2.0 * G + 1.0);
    const double err = std::abs(integrate_monomial(r, 2 * G) - exact);
    CHECK(err > 1e-5);
    if (G <= 5) CHECK(err > 1e-3);
  }
}
