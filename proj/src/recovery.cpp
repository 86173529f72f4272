#include "phasecs/recovery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <utility>

#include "phasecs/errors.hpp"
#include "phasecs/kernels.hpp"
#include "phasecs/parallel.hpp"
#include "phasecs/rng.hpp"

namespace phasecs {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

constexpr double kInf = std::numeric_limits<double>::infinity();

MatrixXd to_eigen(const SensingMatrix& a) {
  if (a.m == 0 || a.n == 0) fail_precondition("matrix has a zero dimension");
  if (a.entries.size() != a.m * a.n) fail_precondition("matrix entry buffer has the wrong size");
  return RowMajorMap(a.entries.data(), static_cast<Eigen::Index>(a.m),
                     static_cast<Eigen::Index>(a.n));
}

double l1_norm(const VectorXd& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::fabs(x[i]);
  return s;
}

// || |ax| - b ||_inf, +inf when anything is non-finite
double phaseless_residual(const VectorXd& ax, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    double d = std::fabs(std::fabs(ax[static_cast<Eigen::Index>(j)]) - b[j]);
    if (!std::isfinite(d)) return kInf;
    if (d > worst) worst = d;
  }
  return worst;
}

std::vector<std::int8_t> signs_from(const VectorXd& ax, const std::vector<std::int8_t>* prev) {
  std::vector<std::int8_t> eps(static_cast<std::size_t>(ax.size()));
  for (std::size_t j = 0; j < eps.size(); ++j) {
    double v = ax[static_cast<Eigen::Index>(j)];
    if (v > 0.0) {
      eps[j] = 1;
    } else if (v < 0.0) {
      eps[j] = -1;
    } else {
      eps[j] = prev ? (*prev)[j] : std::int8_t{1};
    }
  }
  return eps;
}

VectorXd signed_rhs(const std::vector<std::int8_t>& eps, const std::vector<double>& b) {
  VectorXd y(static_cast<Eigen::Index>(b.size()));
  for (std::size_t j = 0; j < b.size(); ++j)
    y[static_cast<Eigen::Index>(j)] = static_cast<double>(eps[j]) * b[j];
  return y;
}

std::vector<double> to_std(const VectorXd& x) {
  return std::vector<double>(x.data(), x.data() + x.size());
}

// +1 sorts before -1 so the canonical representative is the all-positive-most
// pattern among ties
bool pattern_lex_less(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b) {
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] != b[j]) return a[j] > b[j];
  return false;
}

// argmin_x 0.5||Ax - y||^2 + lam||x||_1 by ADMM; `normal` holds A^T A + rho I
// and `aty` holds A^T y, so each iteration is one back-solve
VectorXd admm_lasso(const Eigen::LDLT<MatrixXd>& normal, const VectorXd& aty, double lam,
                    double rho, int iters, double tol, int* used = nullptr) {
  const Eigen::Index n = aty.size();
  VectorXd x = VectorXd::Zero(n);
  VectorXd z = VectorXd::Zero(n);
  VectorXd u = VectorXd::Zero(n);
  VectorXd zold(n), w(n);
  int it = 0;
  while (it < iters) {
    x = normal.solve(aty + rho * (z - u));
    zold = z;
    w = x + u;
    kernels::soft_threshold(z.data(), w.data(), lam / rho, static_cast<std::size_t>(n));
    u += x - z;
    ++it;
    if ((x - z).lpNorm<Eigen::Infinity>() <= tol &&
        (z - zold).lpNorm<Eigen::Infinity>() <= tol)
      break;
  }
  if (used) *used = it;
  return z;
}

void check_measurements(const SensingMatrix& a, const Measurements& b) {
  if (b.m() != a.m) fail_precondition("measurement count does not match the matrix rows");
  for (double v : b.b)
    if (!(v >= 0.0) || !std::isfinite(v))
      fail_precondition("measurements must be finite and nonnegative");
  if (!b.matrix_fingerprint.empty() && b.matrix_fingerprint != matrix_fingerprint(a))
    fail_precondition("measurements were taken with a different matrix");
}

}  // namespace

const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

struct BasisPursuitSolver::Impl {
  MatrixXd M;
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod;
  Eigen::LDLT<MatrixXd> normal;
  BasisPursuitOptions opts;
  std::size_t m = 0;
  std::size_t n = 0;
  int rank = 0;
};

BasisPursuitSolver::BasisPursuitSolver(const SensingMatrix& a, const BasisPursuitOptions& opts)
    : impl_(new Impl) {
  if (opts.max_iters < 1) fail_precondition("max_iters must be positive");
  if (!(opts.primal_tol > 0.0) || !(opts.dual_tol > 0.0))
    fail_precondition("tolerances must be positive");
  if (!(opts.penalty > 0.0)) fail_precondition("penalty must be positive");
  impl_->M = to_eigen(a);
  impl_->opts = opts;
  impl_->m = a.m;
  impl_->n = a.n;
  impl_->cod.compute(impl_->M);
  impl_->rank = static_cast<int>(impl_->cod.rank());
  MatrixXd gram = impl_->M.transpose() * impl_->M;
  gram.diagonal().array() += opts.penalty;
  impl_->normal.compute(gram);
}

BasisPursuitSolver::~BasisPursuitSolver() = default;
BasisPursuitSolver::BasisPursuitSolver(BasisPursuitSolver&&) noexcept = default;
BasisPursuitSolver& BasisPursuitSolver::operator=(BasisPursuitSolver&&) noexcept = default;

int BasisPursuitSolver::rank() const { return impl_->rank; }
std::size_t BasisPursuitSolver::rows() const { return impl_->m; }
std::size_t BasisPursuitSolver::cols() const { return impl_->n; }

std::vector<double> BasisPursuitSolver::least_squares(const std::vector<double>& y) const {
  if (y.size() != impl_->m) fail_precondition("right-hand side length mismatch");
  Eigen::Map<const VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  VectorXd x = impl_->cod.solve(yv);
  return to_std(x);
}

std::vector<double> BasisPursuitSolver::lasso(const std::vector<double>& y, double lambda,
                                              int iters, double tol) const {
  if (y.size() != impl_->m) fail_precondition("right-hand side length mismatch");
  if (!(lambda >= 0.0)) fail_precondition("lambda must be nonnegative");
  Eigen::Map<const VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  VectorXd aty = impl_->M.transpose() * yv;
  VectorXd z = admm_lasso(impl_->normal, aty, lambda, impl_->opts.penalty, iters, tol);
  return to_std(z);
}

BasisPursuitResult BasisPursuitSolver::solve(const std::vector<double>& y) const {
  if (y.size() != impl_->m) fail_precondition("right-hand side length mismatch");
  const auto& opts = impl_->opts;
  const Eigen::Index n = static_cast<Eigen::Index>(impl_->n);
  Eigen::Map<const VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));

  VectorXd xls = impl_->cod.solve(yv);
  double res = (impl_->M * xls - yv).lpNorm<Eigen::Infinity>();
  if (!(res <= opts.primal_tol)) {
    // no feasible point; hand back a shrunk least-squares surrogate so sign
    // iteration callers still get a descent direction
    VectorXd aty = impl_->M.transpose() * yv;
    double lam = 0.05 * aty.lpNorm<Eigen::Infinity>();
    int used = 0;
    VectorXd z = admm_lasso(impl_->normal, aty, lam, opts.penalty,
                            std::min(opts.max_iters, 2000), std::max(opts.dual_tol, 1e-12),
                            &used);
    return {to_std(z), SolveStatus::Infeasible, used};
  }
  if (impl_->rank == static_cast<int>(impl_->n)) {
    // full column rank: the feasible set is this single point
    return {to_std(xls), SolveStatus::Converged, 1};
  }

  // split x/z with projection onto {Mx = y}; the minimum-norm feasible point
  // seeds the iteration
  const double rho = opts.penalty;
  VectorXd z = xls;
  VectorXd u = VectorXd::Zero(n);
  VectorXd x = xls, zold(n), w(n);
  SolveStatus status = SolveStatus::MaxIters;
  int it = 0;
  const double sqn = std::sqrt(static_cast<double>(impl_->n));
  while (it < opts.max_iters) {
    VectorXd v = z - u;
    x = v - impl_->cod.solve(impl_->M * v - yv);
    zold = z;
    w = x + u;
    kernels::soft_threshold(z.data(), w.data(), 1.0 / rho, static_cast<std::size_t>(n));
    u += x - z;
    ++it;
    double rp = (x - z).norm();
    double rd = rho * (z - zold).norm();
    double ep = sqn * opts.primal_tol + opts.primal_tol * std::max(x.norm(), z.norm());
    double ed = sqn * opts.dual_tol + opts.dual_tol * (rho * u).norm();
    if (rp <= ep && rd <= ed) {
      status = SolveStatus::Converged;
      break;
    }
  }

  // x lies on the affine set; debias on the support of z and keep the refit
  // if it stays feasible without losing l1 value
  VectorXd best = x;
  double best_l1 = l1_norm(x);
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::fabs(z[i]) > 1e-10) support.push_back(i);
  if (!support.empty() && support.size() < impl_->n) {
    MatrixXd sub(impl_->M.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j)
      sub.col(static_cast<Eigen::Index>(j)) = impl_->M.col(support[j]);
    VectorXd ws = sub.colPivHouseholderQr().solve(yv);
    if (ws.allFinite() && (sub * ws - yv).lpNorm<Eigen::Infinity>() <= opts.primal_tol) {
      double cand_l1 = l1_norm(ws);
      if (cand_l1 <= best_l1 + 1e-12) {
        best = VectorXd::Zero(n);
        for (std::size_t j = 0; j < support.size(); ++j)
          best[support[j]] = ws[static_cast<Eigen::Index>(j)];
        best_l1 = cand_l1;
      }
    }
  }
  return {to_std(best), status, it};
}

BasisPursuitResult basis_pursuit(const SensingMatrix& a, const std::vector<double>& y,
                                 const BasisPursuitOptions& opts) {
  BasisPursuitSolver solver(a, opts);
  return solver.solve(y);
}

CertificateReport bp_certificate(const SensingMatrix& a, const std::vector<double>& y,
                                 const std::vector<double>& x_hat, double tol) {
  if (!(tol > 0.0)) fail_precondition("tolerance must be positive");
  if (y.size() != a.m) fail_precondition("right-hand side length mismatch");
  if (x_hat.size() != a.n) fail_precondition("candidate length mismatch");
  MatrixXd M = to_eigen(a);
  Eigen::Map<const VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
  Eigen::Map<const VectorXd> xv(x_hat.data(), static_cast<Eigen::Index>(x_hat.size()));

  CertificateReport rep;
  double res = (M * xv - yv).lpNorm<Eigen::Infinity>();
  if (!(res <= tol)) {
    rep.reason = "point is infeasible for the equality system";
    return rep;
  }

  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(M);
  if (cod.rank() == static_cast<Eigen::Index>(a.n)) {
    rep.ok = true;
    rep.reason = "unique feasible point";
    return rep;
  }

  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < xv.size(); ++i)
    if (std::fabs(xv[i]) > tol) support.push_back(i);
  if (support.empty()) {
    // feasible zero point of a homogeneous system: optimal with a zero dual
    rep.ok = true;
    rep.reason = "zero minimizer";
    return rep;
  }

  MatrixXd sub(M.rows(), static_cast<Eigen::Index>(support.size()));
  VectorXd sgn(static_cast<Eigen::Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) {
    sub.col(static_cast<Eigen::Index>(j)) = M.col(support[j]);
    sgn[static_cast<Eigen::Index>(j)] = xv[support[j]] > 0.0 ? 1.0 : -1.0;
  }
  // nu solves A_S^T nu = sign(x_S) in the least-squares sense
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> codb(sub.transpose());
  VectorXd nu = codb.solve(sgn);
  rep.support_gap = (sub.transpose() * nu - sgn).lpNorm<Eigen::Infinity>();
  double off = 0.0;
  std::size_t next = 0;
  for (Eigen::Index i = 0; i < M.cols(); ++i) {
    if (next < support.size() && support[next] == i) {
      ++next;
      continue;
    }
    off = std::max(off, std::fabs(M.col(i).dot(nu)));
  }
  rep.offsupport_max = off;
  if (rep.support_gap > tol) {
    rep.reason = "dual fails to match the support signs";
  } else if (off > 1.0 + tol) {
    rep.reason = "dual exceeds the unit bound off the support";
  } else {
    rep.ok = true;
    rep.reason = "dual certificate verified";
  }
  return rep;
}

RecoveryResult sign_enum_oracle(const SensingMatrix& a, const Measurements& b,
                                const OracleOptions& opts) {
  check_measurements(a, b);
  if (a.m > 22) fail_precondition("sign enumeration needs m <= 22");
  if (!(opts.feas_tol > 0.0) || !(opts.tie_tol >= 0.0))
    fail_precondition("oracle tolerances must be positive");

  const std::size_t m = a.m;
  BasisPursuitSolver solver(a, opts.bp);

  std::vector<std::size_t> free_rows;
  for (std::size_t j = 0; j < m; ++j)
    if (b.b[j] != 0.0) free_rows.push_back(j);
  const std::size_t f = free_rows.size();
  const std::uint64_t patterns = f == 0 ? 1 : (std::uint64_t{1} << (f - 1));

  auto pattern_for = [&](std::uint64_t mask) {
    std::vector<std::int8_t> eps(m, 1);
    for (std::size_t t = 1; t < f; ++t)
      if ((mask >> (t - 1)) & 1ULL) eps[free_rows[t]] = -1;
    return eps;
  };

  auto evaluate = [&](const std::vector<std::int8_t>& eps, VectorXd* x_out, double* feas_out) {
    std::vector<double> y(m);
    for (std::size_t j = 0; j < m; ++j) y[j] = static_cast<double>(eps[j]) * b.b[j];
    BasisPursuitResult r = solver.solve(y);
    if (r.status == SolveStatus::Infeasible) return kInf;
    VectorXd x = Eigen::Map<const VectorXd>(r.x_hat.data(),
                                            static_cast<Eigen::Index>(r.x_hat.size()));
    VectorXd ax(static_cast<Eigen::Index>(m));
    kernels::matvec(a.entries.data(), m, a.n, x.data(), ax.data());
    double feas = phaseless_residual(ax, b.b);
    if (feas > opts.feas_tol) return kInf;
    if (x_out) *x_out = x;
    if (feas_out) *feas_out = feas;
    return l1_norm(x);
  };

  // pass 1: l1 value per canonical pattern (infeasible ones stay infinite)
  std::vector<double> values(patterns, kInf);
  for (std::uint64_t mask = 0; mask < patterns; ++mask)
    values[mask] = evaluate(pattern_for(mask), nullptr, nullptr);

  RecoveryResult out;
  out.iterations = static_cast<int>(patterns);
  out.restarts_used = 0;

  double best = kInf;
  for (double v : values) best = std::min(best, v);
  if (!std::isfinite(best)) {
    // no sign pattern admits an exact fit; report the all-positive attempt
    std::vector<std::int8_t> eps(m, 1);
    std::vector<double> y(b.b);
    BasisPursuitResult r = solver.solve(y);
    VectorXd ax(static_cast<Eigen::Index>(m));
    kernels::matvec(a.entries.data(), m, a.n, r.x_hat.data(), ax.data());
    out.x_hat = r.x_hat;
    out.eps.eps = eps;
    out.l1_value = l1_norm(Eigen::Map<const VectorXd>(r.x_hat.data(),
                                                      static_cast<Eigen::Index>(a.n)));
    out.feasibility_residual = phaseless_residual(ax, b.b);
    out.status = SolveStatus::Infeasible;
    out.multiplicity = 0;
    return out;
  }

  // pass 2: count ties and pick the lexicographically smallest tied pattern
  const double tie = opts.tie_tol * std::max(1.0, best);
  int multiplicity = 0;
  std::vector<std::int8_t> winner;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    if (!(values[mask] <= best + tie)) continue;
    ++multiplicity;
    auto eps = pattern_for(mask);
    if (winner.empty() || pattern_lex_less(eps, winner)) winner = std::move(eps);
  }

  VectorXd x;
  double feas = 0.0;
  double value = evaluate(winner, &x, &feas);
  out.x_hat = to_std(x);
  out.eps.eps = winner;
  out.l1_value = value;
  out.feasibility_residual = feas;
  out.status = SolveStatus::Converged;
  out.multiplicity = multiplicity;
  return out;
}

namespace {

struct AltShared {
  const SensingMatrix* a = nullptr;
  const std::vector<double>* b = nullptr;
  MatrixXd M;
  MatrixXd Mt;
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod;
  Eigen::LDLT<MatrixXd> normal;
  std::vector<std::size_t> rows_desc;  // rows by descending measurement value
  std::vector<std::size_t> rows_asc;   // rows by ascending measurement value
  std::vector<double> lambdas;         // geometric relative-weight schedule
  AltMinOptions opts;
};

struct AltCandidate {
  bool valid = false;
  double l1 = kInf;
  double feas = kInf;
  std::vector<double> x;
  std::vector<std::int8_t> eps;
};

struct RestartOutcome {
  AltCandidate best;      // passes the exact-fit gate, minimal l1
  AltCandidate fallback;  // minimal phaseless residual seen at all
  long iterations = 0;
};

class RestartRun {
 public:
  RestartRun(const AltShared& s, std::size_t index) : s_(s), r_(index) {}

  RestartOutcome go() {
    const auto& opts = s_.opts;
    const Eigen::Index n = s_.M.cols();

    VectorXd x0(n);
    if (!opts.initial_x.empty()) {
      x0 = Eigen::Map<const VectorXd>(opts.initial_x.data(), n);
    } else {
      rng::GaussianStream g(rng::derive_seed(opts.seed, {r_}),
                            rng::stream_id(rng::Domain::Restart, r_));
      for (Eigen::Index i = 0; i < n; ++i) x0[i] = g.next();
      double nrm = x0.norm();
      if (nrm > 0.0)
        x0 /= nrm;
      else
        x0[0] = 1.0;
    }

    VectorXd ax0 = s_.M * x0;
    std::vector<std::int8_t> eps0 = signs_from(ax0, nullptr);

    // sweep the raw initial pattern to a fixpoint first; an exact fit here
    // ends the restart (a start at a solution stabilizes immediately)
    std::vector<std::int8_t> eps_pre = eps0;
    bool stable = gs_fixpoint(eps_pre);
    if (stable && out_.best.valid) return std::move(out_);

    // columns most correlated with the signed data are a cheap support guess
    probe_top_correlations(signed_rhs(eps0, *s_.b));

    // annealed sign iteration: shrink hard early, relax, and update signs
    // from a debiased refit at every step
    std::vector<std::int8_t> eps = eps0;
    for (double lam_rel : s_.lambdas) {
      for (int inner = 0; inner < opts.level_iters; ++inner) {
        VectorXd y = signed_rhs(eps, *s_.b);
        VectorXd aty = s_.Mt * y;
        double lam = lam_rel * aty.lpNorm<Eigen::Infinity>();
        if (!(lam > 0.0)) break;
        VectorXd z = admm_lasso(s_.normal, aty, lam, opts.rho, opts.lasso_iters,
                                opts.lasso_tol);
        VectorXd xp = polish(y, z);
        VectorXd axp = s_.M * xp;
        std::vector<std::int8_t> neweps = signs_from(axp, &eps);
        ++out_.iterations;
        if (neweps == eps) break;
        eps = std::move(neweps);
      }
      try_pattern(eps);
    }

    gs_fixpoint(eps);

    // flipping a near-zero measurement's sign is cheap insurance against a
    // single stuck coordinate
    int flips = std::min<int>(opts.flip_probes, static_cast<int>(s_.b->size()));
    for (int t = 0; t < flips; ++t) {
      std::vector<std::int8_t> eps2 = eps;
      std::size_t j = s_.rows_asc[static_cast<std::size_t>(t)];
      eps2[j] = static_cast<std::int8_t>(-eps2[j]);
      gs_fixpoint(eps2);
    }
    return std::move(out_);
  }

 private:
  void consider(const VectorXd& x, const VectorXd& ax, const std::vector<std::int8_t>& eps) {
    double feas = phaseless_residual(ax, *s_.b);
    if (!std::isfinite(feas)) return;
    double value = l1_norm(x);
    if (feas < out_.fallback.feas)
      out_.fallback = {true, value, feas, to_std(x), eps};
    if (feas <= s_.opts.feas_tol && value < out_.best.l1)
      out_.best = {true, value, feas, to_std(x), eps};
  }

  void try_pattern(const std::vector<std::int8_t>& eps) {
    VectorXd y = signed_rhs(eps, *s_.b);
    VectorXd x = s_.cod.solve(y);
    VectorXd ax = s_.M * x;
    consider(x, ax, eps);
  }

  // Gauss-Seidel style sign iteration to a fixpoint; harvests the terminal
  // iterate and probes its largest coordinates
  bool gs_fixpoint(std::vector<std::int8_t>& eps) {
    VectorXd x, ax;
    std::vector<std::int8_t> used;
    bool stable = false;
    for (int it = 0; it < s_.opts.gs_iters; ++it) {
      used = eps;
      VectorXd y = signed_rhs(eps, *s_.b);
      x = s_.cod.solve(y);
      ax = s_.M * x;
      ++out_.iterations;
      std::vector<std::int8_t> neweps = signs_from(ax, &eps);
      if (neweps == eps) {
        stable = true;
        break;
      }
      eps = std::move(neweps);
    }
    if (x.size() == 0) return false;
    consider(x, ax, used);
    probe_top_entries(x);
    return stable;
  }

  void probe_top_entries(const VectorXd& x) {
    std::vector<std::pair<double, std::size_t>> ranked;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] != 0.0) ranked.emplace_back(std::fabs(x[i]), static_cast<std::size_t>(i));
    if (ranked.empty()) return;
    std::size_t take = std::min<std::size_t>(4, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                      ranked.end(), [](const auto& l, const auto& r) {
                        return l.first > r.first || (l.first == r.first && l.second < r.second);
                      });
    std::vector<std::size_t> support;
    for (std::size_t t = 0; t < take; ++t) support.push_back(ranked[t].second);
    std::sort(support.begin(), support.end());
    support_probe(support);
  }

  void probe_top_correlations(const VectorXd& y) {
    VectorXd corr = s_.Mt * y;
    probe_top_entries(corr);
  }

  // exact solves on a guessed support: restrict to the largest measurements,
  // enumerate canonical sign patterns there, and feasibility-check each
  // candidate against all measurements
  void support_probe(const std::vector<std::size_t>& support) {
    const std::size_t s = support.size();
    if (s == 0 || s > s_.opts.probe_cap) return;
    if (!probed_.insert(support).second) return;
    const Eigen::Index m = s_.M.rows();
    if (static_cast<Eigen::Index>(s) > m) return;

    MatrixXd sub(m, static_cast<Eigen::Index>(s));
    for (std::size_t j = 0; j < s; ++j)
      sub.col(static_cast<Eigen::Index>(j)) = s_.M.col(static_cast<Eigen::Index>(support[j]));

    MatrixXd square(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
    VectorXd br(static_cast<Eigen::Index>(s));
    for (std::size_t i = 0; i < s; ++i) {
      std::size_t row = s_.rows_desc[i];
      square.row(static_cast<Eigen::Index>(i)) = sub.row(static_cast<Eigen::Index>(row));
      br[static_cast<Eigen::Index>(i)] = (*s_.b)[row];
    }
    Eigen::PartialPivLU<MatrixXd> lu(square);

    VectorXd rhs(static_cast<Eigen::Index>(s));
    const std::uint64_t masks = std::uint64_t{1} << (s - 1);
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
      rhs[0] = br[0];
      for (std::size_t t = 1; t < s; ++t) {
        double sign = ((mask >> (t - 1)) & 1ULL) ? -1.0 : 1.0;
        rhs[static_cast<Eigen::Index>(t)] = sign * br[static_cast<Eigen::Index>(t)];
      }
      VectorXd w = lu.solve(rhs);
      if (!w.allFinite()) continue;
      VectorXd ax = sub * w;
      VectorXd x = VectorXd::Zero(s_.M.cols());
      for (std::size_t j = 0; j < s; ++j)
        x[static_cast<Eigen::Index>(support[j])] = w[static_cast<Eigen::Index>(j)];
      consider(x, ax, signs_from(ax, nullptr));
    }
  }

  // debias the shrunk iterate: least-squares refit on its largest support,
  // plus probes of that support and its single-column swaps
  VectorXd polish(const VectorXd& y, const VectorXd& z) {
    const Eigen::Index n = s_.M.cols();
    std::vector<std::pair<double, std::size_t>> ranked;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::fabs(z[i]) > 1e-12) ranked.emplace_back(std::fabs(z[i]), static_cast<std::size_t>(i));
    if (ranked.empty()) return VectorXd::Zero(n);
    std::size_t take = std::min<std::size_t>(s_.opts.probe_cap, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                      ranked.end(), [](const auto& l, const auto& r) {
                        return l.first > r.first || (l.first == r.first && l.second < r.second);
                      });
    std::vector<std::size_t> support;
    for (std::size_t t = 0; t < take; ++t) support.push_back(ranked[t].second);
    std::sort(support.begin(), support.end());

    MatrixXd sub(s_.M.rows(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j)
      sub.col(static_cast<Eigen::Index>(j)) = s_.M.col(static_cast<Eigen::Index>(support[j]));
    VectorXd w = sub.colPivHouseholderQr().solve(y);

    support_probe(support);

    if (support.size() >= 2 && static_cast<Eigen::Index>(support.size()) < n &&
        w.allFinite()) {
      // swap the weakest refit coordinates for the columns most correlated
      // with the refit residual
      VectorXd resid = y - sub * w;
      VectorXd corr = s_.Mt * resid;
      std::vector<std::pair<double, std::size_t>> adds;
      std::size_t next = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (next < support.size() && support[next] == static_cast<std::size_t>(i)) {
          ++next;
          continue;
        }
        adds.emplace_back(std::fabs(corr[i]), static_cast<std::size_t>(i));
      }
      std::size_t na = std::min<std::size_t>(2, adds.size());
      std::partial_sort(adds.begin(), adds.begin() + static_cast<std::ptrdiff_t>(na),
                        adds.end(), [](const auto& l, const auto& r) {
                          return l.first > r.first || (l.first == r.first && l.second < r.second);
                        });
      std::vector<std::pair<double, std::size_t>> weak;
      for (std::size_t j = 0; j < support.size(); ++j)
        weak.emplace_back(std::fabs(w[static_cast<Eigen::Index>(j)]), support[j]);
      std::sort(weak.begin(), weak.end());
      std::size_t nw = std::min<std::size_t>(2, weak.size());
      for (std::size_t d = 0; d < nw; ++d) {
        for (std::size_t t = 0; t < na; ++t) {
          std::vector<std::size_t> swapped;
          for (std::size_t v : support)
            if (v != weak[d].second) swapped.push_back(v);
          swapped.push_back(adds[t].second);
          std::sort(swapped.begin(), swapped.end());
          support_probe(swapped);
        }
      }
    }

    VectorXd xp = VectorXd::Zero(n);
    if (w.allFinite())
      for (std::size_t j = 0; j < support.size(); ++j)
        xp[static_cast<Eigen::Index>(support[j])] = w[static_cast<Eigen::Index>(j)];
    return xp;
  }

  const AltShared& s_;
  std::size_t r_;
  RestartOutcome out_;
  std::set<std::vector<std::size_t>> probed_;
};

}  // namespace

RecoveryResult alt_min_recover(const SensingMatrix& a, const Measurements& b, int restarts,
                               const AltMinOptions& opts) {
  check_measurements(a, b);
  if (restarts < 1) fail_precondition("restarts must be positive");
  if (opts.schedule_levels < 1) fail_precondition("schedule needs at least one level");
  if (!(opts.schedule_start >= opts.schedule_end) || !(opts.schedule_end > 0.0))
    fail_precondition("schedule weights must decrease and stay positive");
  if (!(opts.primal_tol > 0.0) || !(opts.feas_tol > 0.0) || !(opts.lasso_tol > 0.0))
    fail_precondition("tolerances must be positive");
  if (opts.level_iters < 1 || opts.lasso_iters < 1 || opts.gs_iters < 1)
    fail_precondition("iteration caps must be positive");
  if (!(opts.rho > 0.0)) fail_precondition("rho must be positive");
  if (opts.probe_cap < 1 || opts.probe_cap > 20)
    fail_precondition("probe_cap must be in [1, 20]");
  if (opts.flip_probes < 0) fail_precondition("flip_probes must be nonnegative");
  if (!opts.initial_x.empty() && opts.initial_x.size() != a.n)
    fail_precondition("initial_x length mismatch");

  AltShared shared;
  shared.a = &a;
  shared.b = &b.b;
  shared.M = to_eigen(a);
  shared.Mt = shared.M.transpose();
  shared.cod.compute(shared.M);
  MatrixXd gram = shared.Mt * shared.M;
  gram.diagonal().array() += opts.rho;
  shared.normal.compute(gram);
  shared.opts = opts;

  shared.rows_desc.resize(a.m);
  for (std::size_t j = 0; j < a.m; ++j) shared.rows_desc[j] = j;
  shared.rows_asc = shared.rows_desc;
  std::stable_sort(shared.rows_desc.begin(), shared.rows_desc.end(),
                   [&](std::size_t l, std::size_t r) { return b.b[l] > b.b[r]; });
  std::stable_sort(shared.rows_asc.begin(), shared.rows_asc.end(),
                   [&](std::size_t l, std::size_t r) { return b.b[l] < b.b[r]; });

  shared.lambdas.resize(static_cast<std::size_t>(opts.schedule_levels));
  if (opts.schedule_levels == 1) {
    shared.lambdas[0] = opts.schedule_start;
  } else {
    double ratio = std::pow(opts.schedule_end / opts.schedule_start,
                            1.0 / static_cast<double>(opts.schedule_levels - 1));
    double lam = opts.schedule_start;
    for (int i = 0; i < opts.schedule_levels; ++i) {
      shared.lambdas[static_cast<std::size_t>(i)] = lam;
      lam *= ratio;
    }
    shared.lambdas.back() = opts.schedule_end;
  }

  std::vector<RestartOutcome> slots(static_cast<std::size_t>(restarts));
  parallel_for(static_cast<std::size_t>(restarts), opts.threads,
               [&](std::size_t r) { slots[r] = RestartRun(shared, r).go(); });

  const AltCandidate* best = nullptr;
  const AltCandidate* fallback = nullptr;
  long iterations = 0;
  for (const auto& slot : slots) {
    iterations += slot.iterations;
    if (slot.best.valid && (!best || slot.best.l1 < best->l1)) best = &slot.best;
    if (slot.fallback.valid && (!fallback || slot.fallback.feas < fallback->feas))
      fallback = &slot.fallback;
  }

  RecoveryResult out;
  out.iterations = static_cast<int>(iterations);
  out.restarts_used = restarts;
  const AltCandidate* pick = best ? best : fallback;
  if (!pick) {
    out.x_hat.assign(a.n, 0.0);
    out.eps.eps.assign(a.m, 1);
    VectorXd ax = VectorXd::Zero(static_cast<Eigen::Index>(a.m));
    out.feasibility_residual = phaseless_residual(ax, b.b);
    out.status = SolveStatus::MaxIters;
    return out;
  }
  out.x_hat = pick->x;
  out.eps.eps = pick->eps;
  out.l1_value = pick->l1;
  out.feasibility_residual = pick->feas;
  out.status =
      pick->feas <= opts.primal_tol ? SolveStatus::Converged : SolveStatus::MaxIters;
  return out;
}

L0Result l0_oracle(const SensingMatrix& a, const Measurements& b, std::size_t k_max,
                   std::uint64_t budget) {
  check_measurements(a, b);
  if (k_max > a.n) fail_precondition("k_max exceeds the dimension");
  constexpr double kExactTol = 1e-8;

  std::vector<std::size_t> free_rows;
  for (std::size_t j = 0; j < a.m; ++j)
    if (b.b[j] != 0.0) free_rows.push_back(j);
  const std::size_t f = free_rows.size();
  const double patterns = f == 0 ? 1.0 : std::ldexp(1.0, static_cast<int>(f - 1));

  double total = 0.0;
  double binom = 1.0;
  for (std::size_t s = 0; s <= k_max; ++s) {
    total += binom * patterns;
    binom = binom * static_cast<double>(a.n - s) / static_cast<double>(s + 1);
  }
  if (total > static_cast<double>(budget))
    throw budget_error("support/sign enumeration too large",
                       total > 1e18 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(total),
                       budget);

  double bmax = 0.0;
  for (double v : b.b) bmax = std::max(bmax, v);
  if (bmax <= kExactTol) {
    L0Result r;
    r.x.assign(a.n, 0.0);
    r.k = 0;
    r.found = true;
    return r;
  }

  MatrixXd M = to_eigen(a);
  const std::uint64_t masks = f == 0 ? 1 : (std::uint64_t{1} << (f - 1));

  for (std::size_t s = 1; s <= k_max; ++s) {
    std::vector<std::size_t> comb(s);
    for (std::size_t i = 0; i < s; ++i) comb[i] = i;
    while (true) {
      MatrixXd sub(M.rows(), static_cast<Eigen::Index>(s));
      for (std::size_t j = 0; j < s; ++j)
        sub.col(static_cast<Eigen::Index>(j)) = M.col(static_cast<Eigen::Index>(comb[j]));
      Eigen::ColPivHouseholderQR<MatrixXd> qr(sub);

      VectorXd y = VectorXd::Zero(M.rows());
      for (std::uint64_t mask = 0; mask < masks; ++mask) {
        for (std::size_t t = 0; t < f; ++t) {
          double sign = t == 0 ? 1.0 : (((mask >> (t - 1)) & 1ULL) ? -1.0 : 1.0);
          y[static_cast<Eigen::Index>(free_rows[t])] = sign * b.b[free_rows[t]];
        }
        VectorXd w = qr.solve(y);
        if (!w.allFinite()) continue;
        if ((sub * w - y).lpNorm<Eigen::Infinity>() <= kExactTol) {
          L0Result r;
          r.x.assign(a.n, 0.0);
          for (std::size_t j = 0; j < s; ++j) r.x[comb[j]] = w[static_cast<Eigen::Index>(j)];
          r.k = s;
          r.found = true;
          return r;
        }
      }

      // next combination in lexicographic order
      std::size_t i = s;
      while (i > 0 && comb[i - 1] == a.n - s + (i - 1)) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < s; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return {};
}

double recovery_error(const std::vector<double>& x_hat, const std::vector<double>& x0) {
  if (x_hat.size() != x0.size()) fail_precondition("length mismatch");
  double dm = 0.0, dp = 0.0, n0 = 0.0;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    double a = x_hat[i] - x0[i];
    double b = x_hat[i] + x0[i];
    dm += a * a;
    dp += b * b;
    n0 += x0[i] * x0[i];
  }
  if (!(n0 > 0.0)) fail_precondition("reference signal is zero");
  return std::sqrt(std::min(dm, dp) / n0);
}

}  // namespace phasecs
