#pragma once

// Phase-error estimation as a unimodular quadratic program (UQP).
//
// With t = vec of the phase-free forward projection and r = vec of the
// measured data, the residual ||r - diag(t) p||^2 over unit-modulus p is
// lifted to maximising q^H U q with q = [p; 1] and U = mu*I - T_tilde,
//
//   T_tilde = [ T^H T   -T^H r ]      T = diag(t),
//             [ -r^H T     0   ]
//
// which is positive definite once mu exceeds the top eigenvalue. Each
// power step q <- exp(j*arg(U q)) then never decreases the objective.
// A per-pulse averaged form works directly on the range-compressed
// matrices Y (predicted) and R_tilde (measured) and updates one phase
// per pulse row.

#include "lrsar/common.hpp"

#include <numeric>
#include <utility>
#include <vector>

namespace lrsar {

struct UqpProblem {
  CVector t;
  CVector r;
  double mu = 0.0;

  UqpProblem(CVector t_in, CVector r_in, double mu_in)
      : t(std::move(t_in)), r(std::move(r_in)), mu(mu_in) {
    require(t.size() == r.size(), "UqpProblem: t and r must have equal length");
    require(t.size() >= 1, "UqpProblem: empty problem");
    require(mu > 0.0, "UqpProblem: mu must be positive");
    require_finite(t, "UqpProblem t");
    require_finite(r, "UqpProblem r");
  }

  Index lifted_size() const { return t.size() + 1; }

  // U q without forming U; q = [p; tail].
  CVector apply(const CVector& q) const {
    require(q.size() == lifted_size(), "UqpProblem: lifted vector length mismatch");
    const Index m = t.size();
    const auto p = q.head(m);
    const cxd tail = q(m);
    CVector out(m + 1);
    out.head(m) = mu * p - t.conjugate().cwiseProduct(t.cwiseProduct(p)) +
                  t.conjugate().cwiseProduct(r) * tail;
    out(m) = mu * tail + r.dot(t.cwiseProduct(p));
    return out;
  }

  double quadratic_form(const CVector& q) const { return q.dot(apply(q)).real(); }

  CMatrix dense_matrix() const {
    const Index m = t.size();
    CMatrix u = CMatrix::Zero(m + 1, m + 1);
    u.topLeftCorner(m, m).diagonal() = (mu - t.cwiseAbs2().array()).matrix().cast<cxd>();
    u.topRightCorner(m, 1) = t.conjugate().cwiseProduct(r);
    u.bottomLeftCorner(1, m) = t.cwiseProduct(r.conjugate()).transpose();
    u(m, m) = mu;
    return u;
  }
};

// Cheap upper bound on the top eigenvalue of the lifted matrix T_tilde,
// max|t|^2 + ||T^H r||_2; mu above this makes U positive definite.
inline double uqp_mu_bound(const CVector& t, const CVector& r) {
  return t.cwiseAbs2().maxCoeff() + t.conjugate().cwiseProduct(r).norm();
}

inline double default_uqp_mu(const CVector& t, const CVector& r) {
  return 1.01 * uqp_mu_bound(t, r);
}

inline UqpProblem build_uqp(CVector t, CVector r, double mu) {
  return UqpProblem(std::move(t), std::move(r), mu);
}

// One power step on the unit-modulus constraint set. A zero component of
// U q carries no phase information and keeps its previous value.
inline CVector power_step(const UqpProblem& prob, const CVector& q) {
  CVector uq = prob.apply(q);
  CVector next(q.size());
  for (Index i = 0; i < q.size(); ++i) {
    const double mag = std::abs(uq(i));
    next(i) = mag > 0.0 ? uq(i) / mag : q(i);
  }
  return next;
}

struct PowerIterationResult {
  RVector phases;                  // per-entry phase relative to the lifted tail
  std::vector<double> objective;   // q^H U q after each step
  Index iterations = 0;
  bool converged = false;
};

// Runs power steps from p = 1 until the largest per-entry phase change
// falls below tol (radians) or max_iter is hit.
inline PowerIterationResult run_power_iterations(const UqpProblem& prob, double tol,
                                                 Index max_iter) {
  require(tol > 0.0, "run_power_iterations: tol must be positive");
  require(max_iter >= 1, "run_power_iterations: max_iter must be positive");
  const Index m = prob.t.size();
  CVector q = CVector::Ones(m + 1);
  PowerIterationResult res;
  for (Index it = 0; it < max_iter; ++it) {
    const CVector next = power_step(prob, q);
    double delta = 0.0;
    for (Index i = 0; i < q.size(); ++i)
      delta = std::max(delta, std::abs(wrap_angle(std::arg(next(i)) - std::arg(q(i)))));
    q = next;
    res.objective.push_back(prob.quadratic_form(q));
    res.iterations = it + 1;
    if (delta < tol) {
      res.converged = true;
      break;
    }
  }
  res.phases.resize(m);
  const cxd tail = q(m);
  for (Index i = 0; i < m; ++i) res.phases(i) = std::arg(q(i) * std::conj(tail));
  return res;
}

// Averaged per-pulse update. Row i of Y holds the phase-free prediction
// across range cells, row i of Rt the range-compressed data; the new
// phase for pulse i is
//
//   arg( sum_j (mu - |Y_ij|^2) e^{j phi_i} + conj(Y_ij) Rt_ij )
//
// restricted to the given range-cell columns. A vanishing sum retains
// the previous phase.
inline RVector phase_update_simplified(const RVector& phases, const CMatrix& y,
                                       const CMatrix& rt, double mu,
                                       const IndexList& columns) {
  require(y.rows() == rt.rows() && y.cols() == rt.cols(),
          "phase_update_simplified: Y and R_tilde must share shape");
  require(phases.size() == y.rows(), "phase_update_simplified: one phase per pulse row");
  require(mu > 0.0, "phase_update_simplified: mu must be positive");
  require(!columns.empty(), "phase_update_simplified: empty range-cell set");
  for (Index c : columns)
    require(c >= 0 && c < y.cols(), "phase_update_simplified: column out of range");
  RVector next(phases.size());
  for (Index i = 0; i < y.rows(); ++i) {
    const cxd ph = cxd(std::cos(phases(i)), std::sin(phases(i)));
    cxd acc(0.0, 0.0);
    for (Index c : columns)
      acc += (mu - std::norm(y(i, c))) * ph + std::conj(y(i, c)) * rt(i, c);
    next(i) = acc == cxd(0.0, 0.0) ? phases(i) : std::arg(acc);
  }
  return next;
}

inline RVector phase_update_simplified(const RVector& phases, const CMatrix& y,
                                       const CMatrix& rt, double mu) {
  IndexList all(static_cast<std::size_t>(y.cols()));
  std::iota(all.begin(), all.end(), Index{0});
  return phase_update_simplified(phases, y, rt, mu, all);
}

// Same update with mu chosen per pulse row as safety * max_j |Y_ij|^2.
// Each row is an independent scalar UQP, so a row-local mu keeps the
// monotonicity argument while avoiding the heavy damping a single global
// mu imposes on weak rows.
inline RVector phase_update_rowmax(const RVector& phases, const CMatrix& y,
                                   const CMatrix& rt, double safety,
                                   const IndexList& columns) {
  require(safety > 1.0, "phase_update_rowmax: safety factor must exceed 1");
  require(!columns.empty(), "phase_update_rowmax: empty range-cell set");
  RVector next(phases.size());
  for (Index i = 0; i < y.rows(); ++i) {
    double peak = 0.0;
    for (Index c : columns) peak = std::max(peak, std::norm(y(i, c)));
    const double mu = std::max(safety * peak, 1e-300);
    RVector one(1);
    one(0) = phases(i);
    next(i) = phase_update_simplified(one, y.row(i), rt.row(i), mu, columns)(0);
  }
  return next;
}

// Range cells whose energy reaches threshold_frac of the strongest cell.
inline IndexList select_range_cells(const CMatrix& image, double threshold_frac) {
  require(threshold_frac >= 0.0 && threshold_frac <= 1.0,
          "select_range_cells: threshold must lie in [0, 1]");
  RVector energy = image.cwiseAbs2().colwise().sum();
  const double top = energy.maxCoeff();
  require(top > 0.0, "select_range_cells: image has no energy");
  IndexList cells;
  for (Index c = 0; c < energy.size(); ++c)
    if (energy(c) >= threshold_frac * top) cells.push_back(c);
  return cells;
}

}  // namespace lrsar
