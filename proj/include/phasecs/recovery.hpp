#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "phasecs/ensembles.hpp"

namespace phasecs {

enum class SolveStatus { Converged, MaxIters, Infeasible };

const char* solve_status_name(SolveStatus s);

struct BasisPursuitOptions {
  int max_iters = 20000;
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double penalty = 1.0;  // splitting weight of the first-order method
};

struct BasisPursuitResult {
  std::vector<double> x_hat;
  SolveStatus status = SolveStatus::MaxIters;
  int iterations = 0;
};

// Factors the matrix once and serves many right-hand sides: the sign
// enumeration oracle and the alternating solver both hammer this.
class BasisPursuitSolver {
 public:
  BasisPursuitSolver(const SensingMatrix& a, const BasisPursuitOptions& opts);
  ~BasisPursuitSolver();
  BasisPursuitSolver(BasisPursuitSolver&&) noexcept;
  BasisPursuitSolver& operator=(BasisPursuitSolver&&) noexcept;

  // Minimum-l1 point of {x : Ax = y}. If the equality system is inconsistent
  // the status is Infeasible and x_hat carries an l1-penalized least-squares
  // surrogate instead of garbage (callers iterating on sign patterns need a
  // usable descent point). If the feasible set is a single point, that point
  // is returned directly.
  BasisPursuitResult solve(const std::vector<double>& y) const;

  // Minimum-norm least-squares point for Ax = y.
  std::vector<double> least_squares(const std::vector<double>& y) const;

  // l1-penalized least squares: argmin 0.5||Ax - y||^2 + lambda ||x||_1,
  // solved by ADMM on the cached normal-matrix factorization.
  std::vector<double> lasso(const std::vector<double>& y, double lambda, int iters,
                            double tol) const;

  int rank() const;
  std::size_t rows() const;
  std::size_t cols() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

BasisPursuitResult basis_pursuit(const SensingMatrix& a, const std::vector<double>& y,
                                 const BasisPursuitOptions& opts = {});

struct CertificateReport {
  bool ok = false;
  std::string reason;
  double support_gap = 0.0;     // ||A_S^T nu - sign(x_S)||_inf
  double offsupport_max = 0.0;  // max over i not in S of |a_i^T nu|

  explicit operator bool() const { return ok; }
};

// l1 optimality check: builds a dual vector by least squares on the support
// of x_hat and verifies the sign-match and sup-norm conditions. A full
// column-rank system with a feasible x_hat passes vacuously (the feasible set
// is one point).
CertificateReport bp_certificate(const SensingMatrix& a, const std::vector<double>& y,
                                 const std::vector<double>& x_hat, double tol);

struct RecoveryResult {
  std::vector<double> x_hat;
  SignPattern eps;
  double l1_value = 0.0;
  double feasibility_residual = 0.0;  // || |A x_hat| - b ||_inf
  SolveStatus status = SolveStatus::MaxIters;
  int iterations = 0;
  int restarts_used = 0;
  // number of sign patterns tied at the optimal l1 value (oracle only);
  // anything above 1 means the minimizer is not unique modulo global sign
  int multiplicity = 1;
};

struct OracleOptions {
  double feas_tol = 1e-9;  // per-pattern equality feasibility gate
  double tie_tol = 1e-9;   // relative l1 width counted as a tie
  BasisPursuitOptions bp;
};

// Exhaustive search over canonical sign patterns (global sign quotiented by
// fixing the first nonzero measurement positive; zero measurements constrain
// either way and are pinned positive). Needs m <= 22.
RecoveryResult sign_enum_oracle(const SensingMatrix& a, const Measurements& b,
                                const OracleOptions& opts = {});

struct AltMinOptions {
  std::uint64_t seed = 0;
  int threads = 1;
  double primal_tol = 1e-6;  // Converged requires the phaseless residual below this
  double feas_tol = 1e-8;    // candidate harvest gate
  int schedule_levels = 25;
  double schedule_start = 0.5;
  double schedule_end = 0.005;
  int level_iters = 4;
  int lasso_iters = 400;
  double lasso_tol = 1e-9;
  double rho = 1.0;
  std::size_t probe_cap = 6;  // support probes solve 2^(|S|-1) small systems
  int gs_iters = 30;
  int flip_probes = 4;
  std::vector<double> initial_x;  // fixed initialization instead of random draws
};

// Alternating sign/solve recovery from phaseless measurements. Each restart
// anneals an l1 shrinkage weight from schedule_start to schedule_end, updates
// the sign pattern from a support-debiased iterate, and harvests every
// feasible candidate along the way (including exact solves on probed
// supports). The best feasible candidate by l1 value wins; ties go to the
// earliest restart.
RecoveryResult alt_min_recover(const SensingMatrix& a, const Measurements& b, int restarts,
                               const AltMinOptions& opts = {});

struct L0Result {
  std::vector<double> x;
  std::size_t k = 0;
  bool found = false;
};

// Smallest-support exact fit: enumerates supports of size 0..k_max in
// lexicographic order and canonical sign patterns per support; returns the
// first exact fit. Intended for tiny instances; refuses above `budget` least
// squares solves.
L0Result l0_oracle(const SensingMatrix& a, const Measurements& b, std::size_t k_max,
                   std::uint64_t budget = 100000000ULL);

// Relative error modulo global sign: min(||x-x0||, ||x+x0||) / ||x0||.
double recovery_error(const std::vector<double>& x_hat, const std::vector<double>& x0);

}  // namespace phasecs
