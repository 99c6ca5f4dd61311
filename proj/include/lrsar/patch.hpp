#pragma once

// Sliding-window patch transform between a scene and its Casorati matrix.
//
// patchify() lifts a side x side scene into an n x K matrix whose columns
// are vectorized window contents: n = window^2 and K = k_side^2 with
// k_side = (side - window)/step + 1. Window corners are walked in
// column-major order, matching the vectorization convention, so the
// transform is a pure 0/1 selection. unpatchify() averages overlapping
// window entries per pixel and is an exact left inverse.

#include "lrsar/common.hpp"

namespace lrsar {

struct PatchConfig {
  Index scene_side = 0;
  Index window = 0;
  Index step = 0;

  void validate() const {
    require(scene_side >= 1, "PatchConfig: scene_side must be positive");
    require(window >= 1 && window <= scene_side,
            "PatchConfig: need 1 <= window <= scene_side");
    require(step >= 1, "PatchConfig: step must be positive");
    require((scene_side - window) % step == 0,
            "PatchConfig: (scene_side - window) must be divisible by step");
  }

  Index corners_per_axis() const { return (scene_side - window) / step + 1; }
  Index patch_rows() const { return window * window; }        // n
  Index patch_cols() const {                                  // K
    const Index k = corners_per_axis();
    return k * k;
  }
};

inline CMatrix patchify(const CMatrix& x, const PatchConfig& cfg) {
  cfg.validate();
  require(x.rows() == cfg.scene_side && x.cols() == cfg.scene_side,
          "patchify: scene must be scene_side x scene_side");
  const Index w = cfg.window;
  const Index ks = cfg.corners_per_axis();
  CMatrix f(cfg.patch_rows(), cfg.patch_cols());
  for (Index cj = 0; cj < ks; ++cj) {
    for (Index ci = 0; ci < ks; ++ci) {
      const Index col = cj * ks + ci;
      const auto block = x.block(ci * cfg.step, cj * cfg.step, w, w);
      f.col(col) = Eigen::Map<const CVector>(CMatrix(block).data(), w * w);
    }
  }
  return f;
}

inline CMatrix unpatchify(const CMatrix& f, const PatchConfig& cfg) {
  cfg.validate();
  require(f.rows() == cfg.patch_rows() && f.cols() == cfg.patch_cols(),
          "unpatchify: patch matrix must be window^2 x corners^2");
  const Index w = cfg.window;
  const Index ks = cfg.corners_per_axis();
  CMatrix sum = CMatrix::Zero(cfg.scene_side, cfg.scene_side);
  RMatrix count = RMatrix::Zero(cfg.scene_side, cfg.scene_side);
  for (Index cj = 0; cj < ks; ++cj) {
    for (Index ci = 0; ci < ks; ++ci) {
      const Index col = cj * ks + ci;
      const auto patch = Eigen::Map<const CMatrix>(f.col(col).data(), w, w);
      sum.block(ci * cfg.step, cj * cfg.step, w, w) += patch;
      count.block(ci * cfg.step, cj * cfg.step, w, w).array() += 1.0;
    }
  }
  // Every pixel lies in at least one window, so count > 0 everywhere.
  return sum.array() / count.array().cast<cxd>();
}

// Dense 0/1 lift matrix (nK x I) and its averaging left inverse (I x nK),
// for direct-solve baselines and small-size oracle checks.
inline CMatrix dense_patchify_matrix(const PatchConfig& cfg) {
  cfg.validate();
  const Index side = cfg.scene_side;
  const Index nk = cfg.patch_rows() * cfg.patch_cols();
  CMatrix p = CMatrix::Zero(nk, side * side);
  const Index w = cfg.window;
  const Index ks = cfg.corners_per_axis();
  for (Index cj = 0; cj < ks; ++cj)
    for (Index ci = 0; ci < ks; ++ci) {
      const Index col = cj * ks + ci;
      for (Index bc = 0; bc < w; ++bc)
        for (Index br = 0; br < w; ++br) {
          const Index patch_row = bc * w + br;
          const Index pixel = (cj * cfg.step + bc) * side + (ci * cfg.step + br);
          p(col * cfg.patch_rows() + patch_row, pixel) = 1.0;
        }
    }
  return p;
}

inline CMatrix dense_unpatchify_matrix(const PatchConfig& cfg) {
  const CMatrix p = dense_patchify_matrix(cfg);
  const RVector counts = p.real().colwise().sum();
  CMatrix pinv = p.adjoint();
  for (Index pix = 0; pix < pinv.rows(); ++pix) pinv.row(pix) /= counts(pix);
  return pinv;
}

}  // namespace lrsar
