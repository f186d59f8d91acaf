// Solver for the 2x2 block systems of the time steppers:
//   [ cM*M + cH*I + cAlpha*Bbd   cA*A^T ] [u]   [r_u]
//   [ cA*A                      -cA*M   ] [q] = [r_q]
// M is diagonal, so q is eliminated exactly and the Schur complement
// S = A11 + cA*A^T M^{-1} A (SPD for the IEQ schemes) is solved by CG
// preconditioned with a cached sparse factorization.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <memory>
#include <utility>

#include "ieqdg/assembly.hpp"
#include "ieqdg/errors.hpp"

namespace ieqdg {

struct BlockSystem {
  const Eigen::VectorXd* M = nullptr;
  const SpMat* A = nullptr;
  const SpMat* At = nullptr;   ///< matrix used in the u-equation coupling (A^T, or A itself when symmetric)
  const SpMat* Bbd = nullptr;  ///< may be null (no boundary mass)
  const BlockDiagMatrix* Iblk = nullptr;  ///< may be null
  double cM = 1.0;
  double cH = 0.0;
  double cAlpha = 0.0;
  double cA = 1.0;
  Eigen::VectorXd r_u, r_q;
  double tol = 1e-12;
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;
  bool direct = false;
  int refactorizations = 0;
};

/// Relative residual of a candidate solution on the full stacked system.
inline double block_residual(const BlockSystem& sys, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& q) {
  Eigen::VectorXd res_u = sys.cM * sys.M->cwiseProduct(u) + sys.cA * (*sys.At * q) - sys.r_u;
  if (sys.Iblk) res_u += sys.cH * sys.Iblk->apply(u);
  if (sys.Bbd && sys.Bbd->nonZeros() > 0) res_u += sys.cAlpha * (*sys.Bbd * u);
  Eigen::VectorXd res_q = sys.cA * (*sys.A * u) - sys.cA * sys.M->cwiseProduct(q) - sys.r_q;
  const double bn = std::sqrt(sys.r_u.squaredNorm() + sys.r_q.squaredNorm());
  const double rn = std::sqrt(res_u.squaredNorm() + res_q.squaredNorm());
  return bn > 0.0 ? rn / bn : rn;
}

/// Dense direct solve of the stacked system; the test oracle and the small-system fallback.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_block_dense(const BlockSystem& sys) {
  const int n = static_cast<int>(sys.M->size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  K.topLeftCorner(n, n) = Eigen::MatrixXd((sys.cM * (*sys.M)).asDiagonal());
  if (sys.Iblk) K.topLeftCorner(n, n) += sys.cH * Eigen::MatrixXd(sys.Iblk->to_sparse());
  if (sys.Bbd && sys.Bbd->nonZeros() > 0) K.topLeftCorner(n, n) += sys.cAlpha * Eigen::MatrixXd(*sys.Bbd);
  K.topRightCorner(n, n) = sys.cA * Eigen::MatrixXd(*sys.At);
  K.bottomLeftCorner(n, n) = sys.cA * Eigen::MatrixXd(*sys.A);
  K.bottomRightCorner(n, n) = Eigen::MatrixXd((-sys.cA * (*sys.M)).asDiagonal());
  Eigen::VectorXd rhs(2 * n);
  rhs << sys.r_u, sys.r_q;
  const Eigen::VectorXd x = Eigen::FullPivLU<Eigen::MatrixXd>(K).solve(rhs);
  return {x.head(n), x.tail(n)};
}

/// Stateful Schur-complement solver; reuses the symbolic analysis and keeps the last
/// numeric factorization as a CG preconditioner until it goes stale.
class SchurSolver {
 public:
  SchurSolver() = default;

  SchurSolver(const Eigen::VectorXd& M, const SpMat& A, const SpMat& At, const SpMat& Bbd)
      : M_(&M), A_(&A), At_(&At), Bbd_(&Bbd) {
    const Eigen::VectorXd minv = M.cwiseInverse();
    SpMat MinvA = A;
    for (int k = 0; k < MinvA.outerSize(); ++k) {
      for (SpMat::InnerIterator it(MinvA, k); it; ++it) it.valueRef() *= minv[it.row()];
    }
    P_ = (At * MinvA).pruned(0.0);
    P_.makeCompressed();
  }

  explicit SchurSolver(const BilinearOperator& ops) : SchurSolver(ops.M, ops.A, ops.At, ops.Bbd) {}

  std::pair<Eigen::VectorXd, Eigen::VectorXd> solve(const BlockSystem& sys, SolveReport& rep) {
    if (!(sys.tol > 0.0) || sys.tol > 1e-4) {
      throw ContractViolation("solve_block: tol must lie in (0, 1e-4]");
    }
    const int n = static_cast<int>(M_->size());
    rep = SolveReport{};
    if (sys.r_u.size() != n || sys.r_q.size() != n) {
      throw ContractViolation("solve_block: rhs size mismatch");
    }
    if (sys.r_u.isZero(0.0) && sys.r_q.isZero(0.0)) {
      return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
    }

    const Eigen::VectorXd minv = M_->cwiseInverse();
    const Eigen::VectorXd rhs = sys.r_u + *At_ * minv.cwiseProduct(sys.r_q);
    const long budget = 10L * 2L * n;

    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd q;
    double res = 0.0;
    for (int attempt = 0; attempt < 2; ++attempt) {
      if (attempt > 0 || !factorized_) refresh(sys, rep);
      pcg(sys, rhs, u, sys.tol * (attempt == 0 ? 0.1 : 0.01), budget, rep);
      q = minv.cwiseProduct(*A_ * u - sys.r_q / sys.cA);
      res = block_residual(sys, u, q);
      if (res <= sys.tol) break;
    }
    if (res > sys.tol && 2 * n < 2000) {
      auto [ud, qd] = solve_block_dense(sys);
      rep.direct = true;
      rep.residual = block_residual(sys, ud, qd);
      return {std::move(ud), std::move(qd)};
    }
    rep.residual = res;
    if (res > sys.tol) {
      throw SolverError("solve_block: relative residual " + fmt_res(res) +
                            " above tolerance after iteration budget",
                        res, rep.iterations);
    }
    // Stale-preconditioner refresh policy for the next call.
    if (last_pcg_iters_ > 60) factorized_ = false;
    return {std::move(u), std::move(q)};
  }

 private:
  Eigen::VectorXd apply_S(const BlockSystem& sys, const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = sys.cM * M_->cwiseProduct(x) + sys.cA * (P_ * x);
    if (sys.Iblk) y += sys.cH * sys.Iblk->apply(x);
    if (Bbd_->nonZeros() > 0 && sys.cAlpha != 0.0) y += sys.cAlpha * (*Bbd_ * x);
    return y;
  }

  void refresh(const BlockSystem& sys, SolveReport& rep) {
    const int n = static_cast<int>(M_->size());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(P_.nonZeros() + (sys.Iblk ? sys.Iblk->n_dofs() * sys.Iblk->N : 0) +
                  Bbd_->nonZeros() + n);
    for (int k = 0; k < P_.outerSize(); ++k) {
      for (SpMat::InnerIterator it(P_, k); it; ++it) {
        trips.emplace_back(it.row(), it.col(), sys.cA * it.value());
      }
    }
    if (sys.Iblk) sys.Iblk->add_to_triplets(trips, sys.cH);
    if (sys.cAlpha != 0.0) {
      for (int k = 0; k < Bbd_->outerSize(); ++k) {
        for (SpMat::InnerIterator it(*Bbd_, k); it; ++it) {
          trips.emplace_back(it.row(), it.col(), sys.cAlpha * it.value());
        }
      }
    }
    for (int i = 0; i < n; ++i) trips.emplace_back(i, i, sys.cM * (*M_)[i]);
    SpMat S(n, n);
    S.setFromTriplets(trips.begin(), trips.end());
    S.makeCompressed();
    if (!analyzed_) {
      ldlt_.analyzePattern(S);
      analyzed_ = true;
    }
    ldlt_.factorize(S);
    spd_prec_ = (ldlt_.info() == Eigen::Success);
    if (!spd_prec_) {
      lu_.compute(S);  // baseline schemes can make A11 indefinite
      if (lu_.info() != Eigen::Success) {
        throw SolverError("solve_block: preconditioner factorization failed", 1.0, 0);
      }
    }
    factorized_ = true;
    ++rep.refactorizations;
  }

  /// Preconditioned CG on S u = rhs, continuing from the current iterate. Returns
  /// when the target is met, progress stagnates near the attainable floor, or the
  /// budget is exhausted; the caller judges the stacked-system residual contract.
  bool pcg(const BlockSystem& sys, const Eigen::VectorXd& rhs, Eigen::VectorXd& u,
           double rel_tol, long budget, SolveReport& rep) {
    const double bn = rhs.norm();
    if (bn == 0.0) {
      u.setZero();
      return true;
    }
    Eigen::VectorXd r = rhs - apply_S(sys, u);
    double rn = r.norm();
    if (rn <= rel_tol * bn) return true;
    Eigen::VectorXd z = precond(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    Eigen::VectorXd u_best = u;
    double best = rn;
    long best_iter = 0;
    last_pcg_iters_ = 0;
    for (long it = 0; it < budget; ++it) {
      const Eigen::VectorXd Sp = apply_S(sys, p);
      const double pSp = p.dot(Sp);
      if (!(pSp > 0.0) || !std::isfinite(pSp)) {
        if (spd_prec_) {
          u = u_best;
          return false;  // force refresh / fallback
        }
        // Indefinite system: take the direct solve from the LU factorization.
        u = lu_.solve(rhs);
        ++rep.iterations;
        last_pcg_iters_ = 1;
        return true;
      }
      const double step = rz / pSp;
      u += step * p;
      r -= step * Sp;
      ++rep.iterations;
      ++last_pcg_iters_;
      rn = r.norm();
      if (rn < best) {
        best = rn;
        u_best = u;
        best_iter = it;
      }
      if (rn <= rel_tol * bn) return true;
      if (it - best_iter > 50) break;  // stagnation at the attainable floor
      z = precond(r);
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    u = u_best;
    return false;
  }

  static std::string fmt_res(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
  }

  Eigen::VectorXd precond(const Eigen::VectorXd& r) const {
    if (spd_prec_) return ldlt_.solve(r);
    return lu_.solve(r);
  }

  const Eigen::VectorXd* M_ = nullptr;
  const SpMat* A_ = nullptr;
  const SpMat* At_ = nullptr;
  const SpMat* Bbd_ = nullptr;
  SpMat P_;  ///< A^T M^{-1} A, fixed per operator
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  Eigen::SparseLU<SpMat> lu_;
  bool analyzed_ = false;
  bool factorized_ = false;
  bool spd_prec_ = true;
  int last_pcg_iters_ = 0;
};

/// One-shot block solve per the module contract; stateful reuse lives in SchurSolver.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_block(const BlockSystem& sys,
                                                               SolveReport& rep) {
  SchurSolver solver(*sys.M, *sys.A, *sys.At, *sys.Bbd);
  return solver.solve(sys, rep);
}

}  // namespace ieqdg
