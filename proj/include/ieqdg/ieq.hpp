// IEQ time stepping: auxiliary variable U = sqrt(Phi(u)+B) stored at quadrature
// nodes, first- and second-order schemes with their exact per-step energy
// identities, and the non-homogeneous load variants.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <string>
#include <utility>

#include "ieqdg/assembly.hpp"
#include "ieqdg/block_solver.hpp"
#include "ieqdg/field.hpp"
#include "ieqdg/model.hpp"

namespace ieqdg {

struct EnergyPair {
  double E = 0.0;     ///< modified energy: 1/2 |q|^2 + U^2 + (alpha/2h) boundary term
  double calE = 0.0;  ///< E - B*|Omega|, the reported quantity
};

struct StepReport {
  double E_before = 0.0;
  double E_after = 0.0;          ///< with the projected U (the monotone sequence)
  double E_after_nodal = 0.0;    ///< with the nodal U (enters the identity)
  double calE_after = 0.0;
  double decrement = 0.0;        ///< ||u^{n+1}-u^n||^2 / dt
  double identity_residual = 0.0;
  int solver_iterations = 0;
  double solver_residual = 0.0;
  int outer_iterations = 1;      ///< linear solves in this step (always 1 for IEQ)
};

struct IEQState {
  const Space* space = nullptr;
  ModelSpec model;
  BCSpec bc;
  BilinearOperator ops;
  std::unique_ptr<SchurSolver> solver;
  double t = 0.0;
  long step_index = 0;
  Eigen::VectorXd u, q, u_prev;  ///< DG coefficients; u_prev for the extrapolation
  Eigen::VectorXd U;             ///< auxiliary variable at quadrature nodes
  Eigen::VectorXd Uh;            ///< DG coefficients of Pi U
  double E0 = 0.0;               ///< initial energy (scales the identity tolerance)
  double solve_tol = 1e-12;
  double identity_rel_tol = 1e-8;
};

namespace detail {

inline double boundary_quad(const IEQState& s, const Eigen::VectorXd& x) {
  if (s.bc.alpha == 0.0 || s.ops.Bbd.nonZeros() == 0) return 0.0;
  return x.dot(s.ops.Bbd * x);
}

inline std::pair<Eigen::VectorXd, Eigen::VectorXd> loads_at(const IEQState& s, double t) {
  if (s.bc.family == BCFamily::periodic || s.bc.homogeneous) {
    return {Eigen::VectorXd::Zero(s.space->n_dofs()), Eigen::VectorXd::Zero(s.space->n_dofs())};
  }
  return assemble_boundary_load(*s.space, s.bc, s.model.a, t);
}

inline Eigen::VectorXd source_vector(const IEQState& s, double t) {
  const auto& f = s.model.source;
  return load_vector(*s.space, sample_at_nodes(*s.space, [&](double x, double y) {
                       return f(x, y, t);
                     }));
}

}  // namespace detail

/// Modified energy of a state; E uses the projected U (the reported sequence).
inline EnergyPair energy(const IEQState& s) {
  EnergyPair e;
  e.E = 0.5 * field_l2_sq(*s.space, s.q) + field_l2_sq(*s.space, s.Uh) +
        0.5 * s.bc.alpha * detail::boundary_quad(s, s.u);
  e.calE = e.E - s.model.potential.B * s.space->mesh.volume();
  return e;
}

/// Initialize: u0 projected into V_h, U from the exact initial data at the nodes,
/// q0 from the constraint M q = A u + L2(0), and u^{-1} = u^0.
inline IEQState init_state(const Space& sp, const ModelSpec& model, const BCSpec& bc,
                           const SpatialFn& u0, double solve_tol = 1e-12) {
  IEQState s;
  s.space = &sp;
  s.model = model;
  s.bc = bc;
  s.ops = assemble_A(sp, bc, model.a);
  s.solver = std::make_unique<SchurSolver>(s.ops);
  s.solve_tol = solve_tol;

  const Eigen::VectorXd u0_nodal = sample_at_nodes(sp, u0);
  s.u = project_nodal(sp, u0_nodal);
  s.u_prev = s.u;
  s.U.resize(u0_nodal.size());
  const PotentialSpec& pot = model.potential;
  for (int i = 0; i < u0_nodal.size(); ++i) {
    s.U[i] = std::sqrt(pot.radicand(u0_nodal[i]));
  }
  s.Uh = project_nodal(sp, s.U);

  const auto [l1, l2] = detail::loads_at(s, 0.0);
  s.q = (s.ops.A * s.u + l2).cwiseQuotient(s.ops.M);
  s.E0 = energy(s).E;
  return s;
}

/// Initialize from DG coefficients (u0 already in V_h, e.g. seeded random data);
/// the auxiliary variable is then built from the nodal values of u0 itself.
inline IEQState init_state_from_coeffs(const Space& sp, const ModelSpec& model, const BCSpec& bc,
                                       const Eigen::VectorXd& u0_coeffs,
                                       double solve_tol = 1e-12) {
  IEQState s;
  s.space = &sp;
  s.model = model;
  s.bc = bc;
  s.ops = assemble_A(sp, bc, model.a);
  s.solver = std::make_unique<SchurSolver>(s.ops);
  s.solve_tol = solve_tol;
  s.u = u0_coeffs;
  s.u_prev = s.u;
  const Eigen::VectorXd u0_nodal = eval_at_nodes(sp, s.u);
  s.U.resize(u0_nodal.size());
  const PotentialSpec& pot = model.potential;
  for (int i = 0; i < u0_nodal.size(); ++i) {
    s.U[i] = std::sqrt(pot.radicand(u0_nodal[i]));
  }
  s.Uh = project_nodal(sp, s.U);
  const auto [l1, l2] = detail::loads_at(s, 0.0);
  s.q = (s.ops.A * s.u + l2).cwiseQuotient(s.ops.M);
  s.E0 = energy(s).E;
  return s;
}

namespace detail {

inline StepReport advance(IEQState& s, double dt, int order) {
  if (!(dt > 0.0)) throw ContractViolation("step: dt must be positive");
  const Space& sp = *s.space;
  const PotentialSpec& pot = s.model.potential;
  const bool loads = !s.bc.homogeneous && s.bc.family != BCFamily::periodic;
  const bool source = static_cast<bool>(s.model.source);
  const double tn = s.t;
  const double tnp1 = s.t + dt;

  // Nodal H at the reference state: u^n (order 1) or the extrapolated u^{n,*} (order 2).
  Eigen::VectorXd uref_nodal;
  if (order == 1) {
    uref_nodal = eval_at_nodes(sp, s.u);
  } else {
    uref_nodal = eval_at_nodes(sp, Eigen::VectorXd(1.5 * s.u - 0.5 * s.u_prev));
  }
  auto [Iblk, Jblk] = assemble_nonlinear_matrices(sp, uref_nodal, pot);
  Eigen::VectorXd Hstar(uref_nodal.size());
  for (int i = 0; i < uref_nodal.size(); ++i) Hstar[i] = pot.H(uref_nodal[i]);

  const double cH = (order == 1) ? 0.5 : 0.25;
  const double cA = (order == 1) ? 1.0 : 0.5;
  const double cAlpha = (order == 1) ? s.bc.alpha : 0.5 * s.bc.alpha;

  Eigen::VectorXd l1_n, l2_n, l1_np1, l2_np1;
  if (loads) {
    std::tie(l1_n, l2_n) = loads_at(s, tn);
    std::tie(l1_np1, l2_np1) = loads_at(s, tnp1);
  }
  Eigen::VectorXd fbar;
  if (source) fbar = 0.5 * (source_vector(s, tnp1) + source_vector(s, tn));

  BlockSystem sys;
  sys.M = &s.ops.M;
  sys.A = &s.ops.A;
  sys.At = &s.ops.At;
  sys.Bbd = &s.ops.Bbd;
  sys.Iblk = &Iblk;
  sys.cM = 1.0 / dt;
  sys.cH = cH;
  sys.cAlpha = cAlpha;
  sys.cA = cA;
  sys.tol = s.solve_tol;

  sys.r_u = s.ops.M.cwiseProduct(s.u) / dt + cH * Iblk.apply(s.u) - Jblk.apply(s.Uh);
  if (order == 2) {
    sys.r_u -= 0.5 * (s.ops.At * s.q);
    if (cAlpha != 0.0 && s.ops.Bbd.nonZeros() > 0) sys.r_u -= cAlpha * (s.ops.Bbd * s.u);
  }
  if (loads) sys.r_u += (order == 1) ? l1_np1 : Eigen::VectorXd(0.5 * (l1_np1 + l1_n));
  if (source) sys.r_u += fbar;
  sys.r_q = loads ? Eigen::VectorXd(-cA * l2_np1) : Eigen::VectorXd::Zero(sp.n_dofs());

  SolveReport rep;
  auto [u_new, q_new] = s.solver->solve(sys, rep);

  // Pointwise U update, then its projection back into V_h.
  const Eigen::VectorXd du_nodal = eval_at_nodes(sp, Eigen::VectorXd(u_new - s.u));
  const Eigen::VectorXd Uh_nodal = eval_at_nodes(sp, s.Uh);
  const Eigen::VectorXd U_new = Uh_nodal + 0.5 * Hstar.cwiseProduct(du_nodal);
  const Eigen::VectorXd Uh_new = project_nodal(sp, U_new);

  StepReport r;
  r.solver_iterations = rep.iterations;
  r.solver_residual = rep.residual;
  r.E_before = energy(s).E;
  const Eigen::VectorXd du = u_new - s.u;
  r.decrement = field_l2_sq(sp, du) / dt;
  r.E_after_nodal = 0.5 * field_l2_sq(sp, q_new) + nodal_l2_sq(sp, U_new) +
                    0.5 * s.bc.alpha * boundary_quad(s, u_new);

  // Residual of the per-step energy identity, with the load/source work terms
  // so that it vanishes (to solver tolerance) for manufactured problems too.
  double res = r.E_after_nodal - r.E_before + r.decrement;
  if (order == 1) {
    res += 0.5 * s.bc.alpha * boundary_quad(s, du);
    res += 0.5 * field_l2_sq(sp, Eigen::VectorXd(q_new - s.q));
    res += nodal_l2_sq(sp, Eigen::VectorXd(U_new - Uh_nodal));
    if (loads) res -= (l2_np1 - l2_n).dot(q_new) + l1_np1.dot(du);
  } else {
    if (loads) {
      res -= (l2_np1 - l2_n).dot(0.5 * (s.q + q_new)) + 0.5 * (l1_np1 + l1_n).dot(du);
    }
  }
  if (source) res -= fbar.dot(du);
  r.identity_residual = res;

  const double tol = s.identity_rel_tol * std::max(std::abs(s.E0), 1.0);
  if (!(std::abs(res) <= tol)) {
    throw AssertionFailure("energy identity violated at step " + std::to_string(s.step_index + 1) +
                           " (t=" + std::to_string(tnp1) + "): |residual| " + std::to_string(res) +
                           " > " + std::to_string(tol));
  }

  s.u_prev = std::move(s.u);
  s.u = std::move(u_new);
  s.q = std::move(q_new);
  s.U = U_new;
  s.Uh = Uh_new;
  s.t = tnp1;
  ++s.step_index;

  const EnergyPair after = energy(s);
  r.E_after = after.E;
  r.calE_after = after.calE;
  return r;
}

}  // namespace detail

/// First-order scheme: implicit q^{n+1}, H frozen at u^n, full-weight boundary mass.
inline StepReport step_first_order(IEQState& s, double dt) { return detail::advance(s, dt, 1); }

/// Second-order scheme: midpoint couplings and the extrapolated u^{n,*} = 3/2 u^n - 1/2 u^{n-1}.
inline StepReport step_second_order(IEQState& s, double dt) { return detail::advance(s, dt, 2); }

/// Non-homogeneous variant: identical schemes with the L1/L2 loads reassembled at
/// each required time. With all data functions zero this reduces bitwise to the
/// homogeneous steppers.
inline StepReport step_nonhomogeneous(IEQState& s, double dt, int order) {
  if (order != 1 && order != 2) throw ContractViolation("step_nonhomogeneous: order must be 1 or 2");
  return detail::advance(s, dt, order);
}

/// Residual of the q-constraint (q, psi) = A(u, psi) + L2(t, psi) in the mass norm.
inline double constraint_residual(const IEQState& s) {
  const auto [l1, l2] = detail::loads_at(s, s.t);
  const Eigen::VectorXd r = s.ops.A * s.u + l2 - s.ops.M.cwiseProduct(s.q);
  return std::sqrt(r.cwiseQuotient(s.ops.M).dot(r));  // L2 norm of the represented residual field
}

}  // namespace ieqdg
