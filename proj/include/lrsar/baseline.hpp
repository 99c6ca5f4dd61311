#pragma once

// Reference implementations used for comparison and oracle testing:
// the conventional ADMM with explicit quadratic solves, the splitting
// based phase estimator it pairs with, and plain matched-filter (RDA)
// imaging.
//
// The quadratic subproblems invert (E^H E + d I) head-on. Below a size
// guard this is a dense LU factorization; above it the solve falls back
// to a fixed-budget Richardson iteration with step 1/(1+d), which is
// exact in the limit because the spectrum of E^H E + d I is {d, 1+d}.
// E^H E does not depend on the phase screen (the screen is unitary and
// cancels), so one factorization serves a whole solve.

#include "lrsar/common.hpp"
#include "lrsar/linops.hpp"
#include "lrsar/metrics.hpp"
#include "lrsar/patch.hpp"
#include "lrsar/prox.hpp"
#include "lrsar/solver.hpp"

#include <Eigen/LU>

#include <chrono>
#include <vector>

namespace lrsar {

// Matched-filter image: adjoint with the phase screen ignored.
inline CMatrix rda_image(const ForwardModel& model, const CMatrix& r) {
  return model.with_identity_phase().adjoint(r);
}

// Dense patch-domain normal matrix P E^H E P^+, an oblique projector.
// Phase-free by construction; intended for sizes where nK x nK fits.
inline CMatrix dense_gram_matrix(const ForwardModel& model, const PatchOp& op) {
  const CMatrix e = dense_forward_matrix(model.with_identity_phase());
  if (!op.enabled) return e.adjoint() * e;
  const CMatrix lift = dense_patchify_matrix(op.cfg);
  const CMatrix restore = dense_unpatchify_matrix(op.cfg);
  return lift * (e.adjoint() * (e * restore));
}

// Explicit solve of the low-rank subproblem,
//   (G + d1 I) vec(L) = vec(EHr) + d1 vec(W) - vec(Z1) - G vec(S),
// with G the dense patch-domain normal matrix and EHr the back
// projection of the data under the current phase estimate.
inline CMatrix update_L_direct(const CMatrix& g, const CMatrix& ehr, const CMatrix& w,
                               const CMatrix& z1, const CMatrix& s, double delta1) {
  require(delta1 > 0.0, "update_L_direct: delta1 must be positive");
  require(g.rows() == g.cols() && g.rows() == ehr.size(),
          "update_L_direct: gram size must match vec(patch matrix)");
  CMatrix a = g;
  a.diagonal().array() += delta1;
  const CVector rhs = vec(ehr) + delta1 * vec(w) - vec(z1) - g * vec(s);
  const CVector sol = Eigen::PartialPivLU<CMatrix>(a).solve(rhs);
  return unvec(sol, ehr.rows(), ehr.cols());
}

// Mirror image of update_L_direct for the sparse channel; the previous
// L is held fixed.
inline CMatrix update_S_direct(const CMatrix& g, const CMatrix& ehr, const CMatrix& q,
                               const CMatrix& z2, const CMatrix& l_prev, double delta2) {
  require(delta2 > 0.0, "update_S_direct: delta2 must be positive");
  require(g.rows() == g.cols() && g.rows() == ehr.size(),
          "update_S_direct: gram size must match vec(patch matrix)");
  CMatrix a = g;
  a.diagonal().array() += delta2;
  const CVector rhs = vec(ehr) + delta2 * vec(q) - vec(z2) - g * vec(l_prev);
  const CVector sol = Eigen::PartialPivLU<CMatrix>(a).solve(rhs);
  return unvec(sol, ehr.rows(), ehr.cols());
}

// Splitting-based phase estimation. The per-measurement factor vector p
// is fit to r against the phase-free projection t = vec(E0 x), with one
// smoothing split w1 and one sparsity split w2 per step:
//
//   w1 = rho1/(rho1 + 2 lf) (p + Y1/rho1)
//   w2 = soft(p + Y2/rho2, 2 lf / rho2)
//   p  = (conj(t) r + rho1 w1 + rho2 w2 - Y1 - Y2) / (|t|^2 + rho1 + rho2)
//
// The quadratic solve is diagonal because diag(t)^H diag(t) is.
struct ConvAutofocusParams {
  double rho1 = 1.0;
  double rho2 = 1.0;
  double lambda_phi = 1.0;

  void validate() const {
    require(rho1 > 0.0 && rho2 > 0.0, "ConvAutofocusParams: rho must be positive");
    require(lambda_phi > 0.0, "ConvAutofocusParams: lambda_phi must be positive");
  }
};

struct ConvAutofocusState {
  CVector p;
  CVector y1;
  CVector y2;

  static ConvAutofocusState init(Index m) {
    ConvAutofocusState st;
    st.p = CVector::Ones(m);
    st.y1 = CVector::Zero(m);
    st.y2 = CVector::Zero(m);
    return st;
  }
};

// One step over (w1, w2, p, Y1, Y2); updates the state in place and
// returns per-pulse phases averaged over the given range cells. Vec
// layout is column-major: measurement (pulse i, cell j) sits at
// j * pulses + i.
inline RVector conventional_autofocus_step(ConvAutofocusState& st, const CVector& t,
                                           const CVector& r, const ConvAutofocusParams& prm,
                                           Index pulses, const IndexList& cells,
                                           const RVector& prev_phases) {
  prm.validate();
  require(t.size() == r.size() && t.size() == st.p.size(),
          "conventional_autofocus_step: length mismatch");
  require(t.size() % pulses == 0, "conventional_autofocus_step: size must split into pulses");
  require(prev_phases.size() == pulses, "conventional_autofocus_step: one phase per pulse");

  const CVector w1 = (prm.rho1 / (prm.rho1 + 2.0 * prm.lambda_phi)) * (st.p + st.y1 / prm.rho1);
  const CVector w2 = soft_threshold(CVector(st.p + st.y2 / prm.rho2),
                                    2.0 * prm.lambda_phi / prm.rho2);
  const RVector h = (t.cwiseAbs2().array() + (prm.rho1 + prm.rho2)).matrix();
  const CVector num =
      t.conjugate().cwiseProduct(r) + prm.rho1 * w1 + prm.rho2 * w2 - st.y1 - st.y2;
  st.p = num.cwiseQuotient(h.cast<cxd>());
  st.y1 += prm.rho1 * (st.p - w1);
  st.y2 += prm.rho2 * (st.p - w2);

  RVector phases(pulses);
  for (Index i = 0; i < pulses; ++i) {
    cxd acc(0.0, 0.0);
    for (Index j : cells) acc += st.p(j * pulses + i);
    phases(i) = acc == cxd(0.0, 0.0) ? prev_phases(i) : std::arg(acc);
  }
  return phases;
}

struct ConventionalConfig {
  SolverConfig base;
  ConvAutofocusParams autofocus;
  Index dense_guard = 4096;      // max n*K for the dense LU path
  Index richardson_iters = 25;   // fixed budget above the guard
};

namespace detail {

// Fixed-budget Richardson solve of (G + d I) x = b in the patch domain,
// G applied through the operators. Step 1/(1+d) annihilates the range
// component of the error immediately and contracts the rest by 1/(1+d).
inline CMatrix richardson_solve(const ForwardModel& model, const PatchOp& op, const CMatrix& b,
                                double delta, Index iters) {
  CMatrix x = CMatrix::Zero(b.rows(), b.cols());
  const double omega = 1.0 / (1.0 + delta);
  for (Index it = 0; it < iters; ++it) {
    const CMatrix gx = op.lift(model.gram(op.restore(x)));
    x += omega * (b - gx - delta * x);
  }
  return x;
}

}  // namespace detail

// Conventional ADMM: identical splitting, stopping rule, and
// diagnostics as solve(), but quadratic subproblems are solved head-on
// and the phase screen is estimated by conventional_autofocus_step.
inline SolveResult conventional_solve(const ForwardModel& model, const CMatrix& r,
                                      const ConventionalConfig& ccfg,
                                      const RVector* true_phases = nullptr) {
  const SolverConfig& cfg = ccfg.base;
  cfg.validate();
  ccfg.autofocus.validate();
  require(ccfg.richardson_iters >= 1, "ConventionalConfig: richardson_iters must be positive");
  require(r.rows() == model.pulses() && r.cols() == model.range_bins(),
          "conventional_solve: data shape must be pulses x range_bins");
  require_finite(r, "conventional_solve: data");
  if (cfg.mode == SolveMode::sar_lrsd)
    require(cfg.patch.scene_side == model.side(),
            "conventional_solve: patch config scene side must match the model");

  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&t_start]() {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t_start)
        .count();
  };

  ForwardModel work = cfg.autofocus ? model.with_identity_phase() : model;
  const PatchOp op{cfg.mode == SolveMode::sar_lrsd, cfg.patch};
  const bool lowrank_on = cfg.mode == SolveMode::sar_lrsd;

  CMatrix x = work.adjoint(r);
  CMatrix f0 = op.lift(x);
  const Index n = f0.rows(), k = f0.cols();

  const double f0_l1 = f0.cwiseAbs().sum();
  require(f0_l1 > 0.0, "conventional_solve: data projects to an all-zero initial scene");
  const double lambda_s =
      cfg.lambda_sparse > 0.0 ? cfg.lambda_sparse
                              : 1.0 / std::sqrt(static_cast<double>(std::max(n, k)));
  const double delta1 =
      cfg.delta1 > 0.0 ? cfg.delta1 : static_cast<double>(n * k) / (4.0 * f0_l1);
  const double delta2 =
      cfg.delta2 > 0.0 ? cfg.delta2 : static_cast<double>(n * k) / (4.0 * f0_l1);

  // Dense path: factor (G + d I) once, G being phase-independent.
  const bool dense_path = n * k <= ccfg.dense_guard;
  CMatrix g;
  Eigen::PartialPivLU<CMatrix> lu1, lu2;
  if (dense_path) {
    g = dense_gram_matrix(work, op);
    CMatrix a1 = g;
    a1.diagonal().array() += delta1;
    lu1.compute(a1);
    CMatrix a2 = g;
    a2.diagonal().array() += delta2;
    lu2.compute(a2);
  }

  auto solve_quadratic = [&](const CMatrix& rhs, double delta,
                             const Eigen::PartialPivLU<CMatrix>& lu) -> CMatrix {
    if (dense_path) return unvec(lu.solve(vec(rhs)), n, k);
    return detail::richardson_solve(work, op, rhs, delta, ccfg.richardson_iters);
  };
  auto gram_lift = [&](const CMatrix& fmat) -> CMatrix {
    if (dense_path) return unvec(CVector(g * vec(fmat)), n, k);
    return op.lift(work.gram(op.restore(fmat)));
  };

  CMatrix l = lowrank_on ? f0 : CMatrix::Zero(n, k);
  CMatrix s = lowrank_on ? CMatrix::Zero(n, k) : f0;
  CMatrix w = CMatrix::Zero(n, k);
  CMatrix q = CMatrix::Zero(n, k);
  CMatrix z1 = CMatrix::Zero(n, k);
  CMatrix z2 = CMatrix::Zero(n, k);
  RVector phases = work.phase().phases;
  ConvAutofocusState af = ConvAutofocusState::init(work.measurements());

  SolveResult res;
  double w_nuclear = 0.0;
  CMatrix x_prev = x;

  for (Index it = 1; it <= cfg.max_outer; ++it) {
    const CMatrix f = l + s;
    if (lowrank_on) {
      const SvtResult sv = svt_with_norm(f - s + z1 / delta1, cfg.lambda_lowrank / delta1);
      w = sv.value;
      w_nuclear = sv.nuclear_norm;
    }
    q = update_Q(f, l, z2, delta2, lambda_s);

    const CMatrix ehr = op.lift(work.adjoint(r));
    const CMatrix l_prev = l;
    if (lowrank_on)
      l = solve_quadratic(ehr + delta1 * w - z1 - gram_lift(s), delta1, lu1);
    s = solve_quadratic(ehr + delta2 * q - z2 - gram_lift(l_prev), delta2, lu2);

    x = op.restore(l + s);
    const bool x_live = x.cwiseAbs2().sum() > 0.0;

    if (cfg.autofocus && x_live) {
      const CVector t = vec(work.with_identity_phase().forward(x));
      const IndexList cells = cfg.mode == SolveMode::isar_sparse
                                  ? select_range_cells(x, cfg.range_cell_threshold)
                                  : detail::all_columns(x.cols());
      phases = conventional_autofocus_step(af, t, vec(r), ccfg.autofocus, work.pulses(),
                                           cells, phases);
      work.set_phases(phases);
    }

    if (lowrank_on)
      update_multipliers(z1, z2, l, w, s, q, delta1, delta2);
    else
      z2 += delta2 * (s - q);

    const double denom = x_prev.norm();
    const double rel = (x.cwiseAbs() - x_prev.cwiseAbs()).norm() /
                       (denom > 0.0 ? denom : 1.0);

    IterationStats st;
    st.iter = it;
    st.rel_change = rel;
    st.objective = 0.5 * (r - work.forward(x)).squaredNorm() +
                   cfg.lambda_lowrank * w_nuclear + lambda_s * q.cwiseAbs().sum();
    st.entropy = x_live ? image_entropy(x) : 0.0;
    if (true_phases != nullptr) st.phase_mse = phase_mse(phases, *true_phases);
    st.elapsed_ms = elapsed_ms();
    res.history.push_back(st);

    x_prev = x;
    res.iterations = it;
    if (rel < cfg.alpha_x) {
      res.converged = true;
      break;
    }
  }

  res.low_rank = lowrank_on ? l : CMatrix();
  res.sparse = s;
  res.image = x;
  res.low_rank_image = lowrank_on ? op.restore(l) : CMatrix();
  res.sparse_image = op.restore(s);
  res.phases = phases;
  return res;
}

}  // namespace lrsar
