// Model data: the quadratized potential, boundary-condition families and their
// parameters, and the PDE constants.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "ieqdg/errors.hpp"

namespace ieqdg {

/// Potential data for u_t = -Laplacian^2 u - a Laplacian u - Psi'(u), quadratized with
/// the shifted potential Phi(w) = Psi(w) - (a^2/8) w^2 and H(w) = Phi'(w)/sqrt(Phi(w)+B).
struct PotentialSpec {
  std::function<double(double)> psi;
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  double B = 1.0;

  /// Phi(w)+B, floored at the floating-point cancellation noise of its evaluation.
  /// inf Phi + B can be exactly zero (Swift-Hohenberg with eps = 2, B = 1 touches it
  /// at w = sqrt(2)); there Phi' vanishes as well and H stays bounded, but the raw
  /// radicand can round below zero. A genuinely negative value still throws.
  double radicand(double w) const {
    const double s = phi(w) + B;
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(phi(w)) + B);
    if (s < -noise) {
      throw PotentialDomainError("PotentialSpec: Phi(w)+B <= 0 at w=" + std::to_string(w));
    }
    return std::max(s, noise);
  }

  double H(double w) const { return dphi(w) / std::sqrt(radicand(w)); }
};

/// Swift-Hohenberg potential (a = 2): Psi(u) = (1-eps)/2 u^2 - g/3 u^3 + u^4/4,
/// so Phi(u) = -eps/2 u^2 - g/3 u^3 + u^4/4 and Phi'(u) = -eps u - g u^2 + u^3.
inline PotentialSpec swift_hohenberg_potential(double eps, double g, double B = 1.0) {
  PotentialSpec p;
  p.psi = [eps, g](double u) {
    return 0.5 * (1.0 - eps) * u * u - g / 3.0 * u * u * u + 0.25 * u * u * u * u;
  };
  p.phi = [eps, g](double u) {
    return -0.5 * eps * u * u - g / 3.0 * u * u * u + 0.25 * u * u * u * u;
  };
  p.dphi = [eps, g](double u) { return -eps * u - g * u * u + u * u * u; };
  p.B = B;
  return p;
}

/// Boundary data function of (x, y, t, nx, ny) where (nx, ny) is the outward unit normal.
using BoundaryFn = std::function<double(double, double, double, double, double)>;

/// Homogeneous boundary conditions by family:
/// clamped (i) u = du/dn = 0; simply_supported (ii) u = Lap u = 0;
/// gen_neumann (iii) du/dn = d(Lap u)/dn = 0.
enum class BCFamily { periodic, clamped, simply_supported, gen_neumann };

struct BCSpec {
  BCFamily family = BCFamily::periodic;
  bool homogeneous = true;
  double alpha = 0.0;  ///< boundary mass weight; equals beta1 for the clamped family
  double beta0 = 0.0;
  double beta1 = 0.0;
  BoundaryFn g1, g2, g3, g4;  ///< Dirichlet / normal-derivative / Laplacian / flux data
};

/// Flux-parameter default for the simply supported family (|beta0| >= 3 needed at k = 1).
inline double default_beta0(int degree) { return degree <= 1 ? 3.0 : 0.0; }

inline BCSpec make_bc(BCFamily family, double beta0 = 0.0, double beta1 = 1.0) {
  BCSpec bc;
  bc.family = family;
  bc.homogeneous = true;
  switch (family) {
    case BCFamily::periodic:
      break;
    case BCFamily::clamped:
      if (beta1 < 0.0) throw ConfigError("make_bc: beta1 must be >= 0");
      bc.beta1 = beta1;
      bc.alpha = beta1;
      break;
    case BCFamily::simply_supported:
      bc.beta0 = beta0;
      break;
    case BCFamily::gen_neumann:
      break;
  }
  return bc;
}

/// PDE constants plus an optional manufactured source f(x, y, t).
struct ModelSpec {
  double a = 2.0;
  PotentialSpec potential;
  std::function<double(double, double, double)> source;  ///< empty means no source
};

}  // namespace ieqdg
