#pragma once

// Inversion-free ADMM for joint low-rank + sparse scene recovery with
// optional per-pulse phase-error estimation.
//
// The data R is modelled as the forward projection of L + S in a patch
// (Casorati) domain. Auxiliary splits W (low rank) and Q (sparse) carry
// the proximal steps; the quadratic subproblems for L and S are solved
// in closed form without any matrix inversion by exploiting that the
// composite operator E satisfies E E^H = I:
//
//   (E^H E + d I)^{-1} = (1/d) (I - E^H E / (1 + d)).
//
// One objective evaluation per iteration and a relative-change test on
// |X| drive the stopping rule. In sparse-only (ISAR) mode the patch
// transform is the identity and the low-rank channel is dropped.

#include "lrsar/autofocus.hpp"
#include "lrsar/common.hpp"
#include "lrsar/linops.hpp"
#include "lrsar/metrics.hpp"
#include "lrsar/patch.hpp"
#include "lrsar/prox.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <vector>

namespace lrsar {

enum class SolveMode { sar_lrsd, isar_sparse };
enum class MuPolicy { global_max, per_row };

struct SolverConfig {
  SolveMode mode = SolveMode::sar_lrsd;
  PatchConfig patch;                    // sar_lrsd only
  bool autofocus = false;

  double lambda_lowrank = 1.0;
  double lambda_sparse = 0.0;           // <= 0 selects max(n, K)^{-1/2}
  double delta1 = 0.0;                  // <= 0 selects n*K / (4 ||F0||_1)
  double delta2 = 0.0;

  double alpha_x = 1e-3;                // outer stop, relative change of |X|
  Index max_outer = 50;
  double inner_tol = 1e-4;              // power-iteration stop (radians)
  Index max_inner = 10;

  MuPolicy mu_policy = MuPolicy::global_max;
  double mu_safety = 1.01;
  double range_cell_threshold = 0.1;    // ISAR autofocus cell gate

  void validate() const {
    require(alpha_x > 0.0 && alpha_x < 1.0, "SolverConfig: alpha_x must lie in (0, 1)");
    require(max_outer >= 1, "SolverConfig: max_outer must be positive");
    require(max_inner >= 1, "SolverConfig: max_inner must be positive");
    require(inner_tol > 0.0, "SolverConfig: inner_tol must be positive");
    require(lambda_lowrank > 0.0, "SolverConfig: lambda_lowrank must be positive");
    require(mu_safety > 1.0, "SolverConfig: mu_safety must exceed 1");
    require(range_cell_threshold >= 0.0 && range_cell_threshold <= 1.0,
            "SolverConfig: range_cell_threshold must lie in [0, 1]");
    if (mode == SolveMode::sar_lrsd) patch.validate();
  }
};

// Scene <-> patch-domain lift; identity in sparse-only mode.
struct PatchOp {
  bool enabled = false;
  PatchConfig cfg;

  CMatrix lift(const CMatrix& image) const { return enabled ? patchify(image, cfg) : image; }
  CMatrix restore(const CMatrix& patches) const {
    return enabled ? unpatchify(patches, cfg) : patches;
  }
};

// Proximal step for the low-rank split: W = SVT(F - S + Z1/d1) at level
// lambda_L/d1, where F = L + S is the current synthesis.
inline CMatrix update_W(const CMatrix& f, const CMatrix& s, const CMatrix& z1,
                        double delta1, double lambda_lowrank) {
  require(delta1 > 0.0, "update_W: delta1 must be positive");
  return svt(f - s + z1 / delta1, lambda_lowrank / delta1);
}

// Proximal step for the sparse split: Q = soft(F - L + Z2/d2) at level
// lambda_s/d2.
inline CMatrix update_Q(const CMatrix& f, const CMatrix& l, const CMatrix& z2,
                        double delta2, double lambda_sparse) {
  require(delta2 > 0.0, "update_Q: delta2 must be positive");
  return soft_threshold(f - l + z2 / delta2, lambda_sparse / delta2);
}

// Closed-form L update. With V = W - Z1/d1 the exact minimiser
// (E^H E + d1 I)^{-1} (E^H r + d1 V - E^H E S) collapses to
//   V - E^H( E(V + S) - R ) / (1 + d1)
// because E^H E is idempotent.
inline CMatrix update_L_fast(const ForwardModel& model, const PatchOp& op, const CMatrix& w,
                             const CMatrix& z1, const CMatrix& s, const CMatrix& r,
                             double delta1) {
  require(delta1 > 0.0, "update_L_fast: delta1 must be positive");
  const CMatrix v = w - z1 / delta1;
  const CMatrix residual = model.forward(op.restore(v + s)) - r;
  return v - op.lift(model.adjoint(residual)) / (1.0 + delta1);
}

// Closed-form S update, same collapse with V = Q - Z2/d2 and the
// previous L held fixed.
inline CMatrix update_S_fast(const ForwardModel& model, const PatchOp& op, const CMatrix& q,
                             const CMatrix& z2, const CMatrix& l_prev, const CMatrix& r,
                             double delta2) {
  require(delta2 > 0.0, "update_S_fast: delta2 must be positive");
  const CMatrix v = q - z2 / delta2;
  const CMatrix residual = model.forward(op.restore(v + l_prev)) - r;
  return v - op.lift(model.adjoint(residual)) / (1.0 + delta2);
}

inline void update_multipliers(CMatrix& z1, CMatrix& z2, const CMatrix& l, const CMatrix& w,
                               const CMatrix& s, const CMatrix& q, double delta1,
                               double delta2) {
  z1 += delta1 * (l - w);
  z2 += delta2 * (s - q);
}

struct IterationStats {
  Index iter = 0;
  double rel_change = 0.0;
  double objective = 0.0;
  double entropy = 0.0;
  double phase_mse = std::numeric_limits<double>::quiet_NaN();
  double elapsed_ms = 0.0;
};

struct SolveResult {
  CMatrix low_rank;       // patch domain, empty in sparse-only mode
  CMatrix sparse;         // patch domain
  CMatrix image;          // recovered scene X
  CMatrix low_rank_image;
  CMatrix sparse_image;
  RVector phases;
  std::vector<IterationStats> history;
  Index iterations = 0;
  bool converged = false;
};

namespace detail {

inline double elementwise_l1(const CMatrix& m) { return m.cwiseAbs().sum(); }

inline IndexList all_columns(Index cols) {
  IndexList all(static_cast<std::size_t>(cols));
  std::iota(all.begin(), all.end(), Index{0});
  return all;
}

}  // namespace detail

// Runs the splitting until the relative change of |X| drops below
// alpha_x or max_outer is reached. When cfg.autofocus is set the model's
// phase screen is re-estimated once per iteration from the current scene
// and the measured data; otherwise the model's phases are trusted as-is.
// true_phases, when provided, only feeds the per-iteration diagnostics.
inline SolveResult solve(const ForwardModel& model, const CMatrix& r, const SolverConfig& cfg,
                         const RVector* true_phases = nullptr) {
  cfg.validate();
  require(r.rows() == model.pulses() && r.cols() == model.range_bins(),
          "solve: data shape must be pulses x range_bins");
  require_finite(r, "solve: data");
  if (cfg.mode == SolveMode::sar_lrsd)
    require(cfg.patch.scene_side == model.side(),
            "solve: patch config scene side must match the model");

  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&t_start]() {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t_start)
        .count();
  };

  ForwardModel work = cfg.autofocus ? model.with_identity_phase() : model;
  const PatchOp op{cfg.mode == SolveMode::sar_lrsd, cfg.patch};
  const bool lowrank_on = cfg.mode == SolveMode::sar_lrsd;

  // Range-compressed data for the phase update; independent of the
  // evolving phase estimate.
  const CMatrix rt = r * work.range_rows().conjugate();

  CMatrix x = work.adjoint(r);
  CMatrix f0 = op.lift(x);
  const Index n = f0.rows(), k = f0.cols();

  const double f0_l1 = detail::elementwise_l1(f0);
  require(f0_l1 > 0.0, "solve: data projects to an all-zero initial scene");
  const double lambda_s =
      cfg.lambda_sparse > 0.0 ? cfg.lambda_sparse
                              : 1.0 / std::sqrt(static_cast<double>(std::max(n, k)));
  const double delta1 = cfg.delta1 > 0.0
                            ? cfg.delta1
                            : static_cast<double>(n * k) / (4.0 * f0_l1);
  const double delta2 = cfg.delta2 > 0.0
                            ? cfg.delta2
                            : static_cast<double>(n * k) / (4.0 * f0_l1);

  CMatrix l = lowrank_on ? f0 : CMatrix::Zero(n, k);
  CMatrix s = lowrank_on ? CMatrix::Zero(n, k) : f0;
  CMatrix w = CMatrix::Zero(n, k);
  CMatrix q = CMatrix::Zero(n, k);
  CMatrix z1 = CMatrix::Zero(n, k);
  CMatrix z2 = CMatrix::Zero(n, k);
  RVector phases = work.phase().phases;

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

    const CMatrix l_prev = l;
    if (lowrank_on) l = update_L_fast(work, op, w, z1, s, r, delta1);
    s = update_S_fast(work, op, q, z2, l_prev, r, delta2);

    x = op.restore(l + s);
    const bool x_live = x.cwiseAbs2().sum() > 0.0;

    if (cfg.autofocus && x_live) {
      const CMatrix y = work.azimuth_rows() * x;
      const IndexList cells = cfg.mode == SolveMode::isar_sparse
                                  ? select_range_cells(x, cfg.range_cell_threshold)
                                  : detail::all_columns(x.cols());
      if (cfg.mu_policy == MuPolicy::per_row) {
        phases = phase_update_rowmax(phases, y, rt, cfg.mu_safety, cells);
      } else {
        const double mu = cfg.mu_safety * y.cwiseAbs2().maxCoeff();
        phases = phase_update_simplified(phases, y, rt, mu, cells);
      }
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
                   cfg.lambda_lowrank * w_nuclear + lambda_s * detail::elementwise_l1(q);
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
