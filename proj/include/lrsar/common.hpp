#pragma once

// Shared scalar/matrix aliases and error types used across the library.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrsar {

using Index = Eigen::Index;
using cxd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using IndexList = std::vector<Index>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Base class for all library failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape or argument violations detected before any numerics run.
struct ValidationError : Error {
  using Error::Error;
};

// Failures inside numerical routines (non-finite data, SVD breakdown).
struct NumericalError : Error {
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const std::string& what) {
  if (!m.allFinite()) throw NumericalError(what + ": non-finite entries");
}

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

// Column-major vectorization and its inverse.
inline CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

inline CMatrix unvec(const CVector& v, Index rows, Index cols) {
  require(v.size() == rows * cols, "unvec: size mismatch");
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

}  // namespace lrsar
