#pragma once

// Proximal operators used by the ADMM splitting: singular value
// thresholding for the nuclear-norm term and complex magnitude
// soft-thresholding for the l1 term.

#include "lrsar/common.hpp"

#include <Eigen/SVD>

namespace lrsar {

struct SvdFactors {
  CMatrix u;
  RVector sigma;
  CMatrix v;
};

// Thin SVD with a fixed gauge: the first nonzero entry of every left
// singular vector is made real and positive, so repeated runs and
// different backends produce identical factors.
inline SvdFactors deterministic_svd(const CMatrix& m) {
  require_finite(m, "deterministic_svd");
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw NumericalError("deterministic_svd: SVD did not converge");
  CMatrix u = svd.matrixU();
  CMatrix v = svd.matrixV();
  for (Index k = 0; k < u.cols(); ++k) {
    for (Index i = 0; i < u.rows(); ++i) {
      const double mag = std::abs(u(i, k));
      if (mag > 0.0) {
        const cxd rot = std::conj(u(i, k)) / mag;
        u.col(k) *= rot;
        v.col(k) *= rot;
        break;
      }
    }
  }
  return SvdFactors{std::move(u), svd.singularValues(), std::move(v)};
}

struct SvtResult {
  CMatrix value;
  double nuclear_norm = 0.0;  // nuclear norm of value, free from the same SVD
};

inline SvtResult svt_with_norm(const CMatrix& m, double tau) {
  require(tau >= 0.0, "svt: threshold must be nonnegative");
  const SvdFactors f = deterministic_svd(m);
  RVector s = (f.sigma.array() - tau).max(0.0);
  return SvtResult{f.u * s.asDiagonal() * f.v.adjoint(), s.sum()};
}

// prox of tau*||.||_* : shrink singular values toward zero by tau.
inline CMatrix svt(const CMatrix& m, double tau) { return svt_with_norm(m, tau).value; }

// prox of tau*||.||_1 for complex entries: shrink magnitude, keep phase.
inline CMatrix soft_threshold(const CMatrix& m, double tau) {
  require(tau >= 0.0, "soft_threshold: threshold must be nonnegative");
  require_finite(m, "soft_threshold");
  return m.unaryExpr([tau](const cxd& z) {
    const double mag = std::abs(z);
    if (mag <= tau) return cxd(0.0, 0.0);
    return z * ((mag - tau) / mag);
  });
}

inline CVector soft_threshold(const CVector& v, double tau) {
  const CMatrix m = soft_threshold(CMatrix(v), tau);
  return m.col(0);
}

}  // namespace lrsar
