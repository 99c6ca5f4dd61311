#include "lrsar/prox.hpp"
#include "lrsar/rng.hpp"
#include "support/test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace lrsar;
using lrsar::testing::random_cmatrix;
using lrsar::testing::random_unitary;
using lrsar::testing::rel_frob;

namespace {

// Spectral norm via SVD.
double opnorm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

TEST_CASE("soft threshold shrinks magnitude and keeps phase") {
  CMatrix m(1, 3);
  m << cxd(3.0, 4.0), cxd(0.5, 0.0), cxd(-2.0, 0.0);
  const CMatrix y = soft_threshold(m, 1.0);
  REQUIRE(std::abs(y(0, 0) - cxd(2.4, 3.2)) < 1e-15);  // |3+4j| = 5 -> scale 4/5
  REQUIRE(y(0, 1) == cxd(0.0, 0.0));
  REQUIRE(std::abs(y(0, 2) - cxd(-1.0, 0.0)) < 1e-15);
  REQUIRE(rel_frob(soft_threshold(m, 0.0), m) == 0.0);
  REQUIRE_THROWS_AS(soft_threshold(m, -0.1), ValidationError);
}

TEST_CASE("soft threshold satisfies the prox optimality conditions") {
  Rng rng(51);
  const CMatrix m = random_cmatrix(rng, 6, 5);
  const double tau = 0.8;
  const CMatrix y = soft_threshold(m, tau);
  for (Index c = 0; c < 5; ++c)
    for (Index r = 0; r < 6; ++r) {
      const cxd diff = m(r, c) - y(r, c);
      if (std::abs(y(r, c)) > 0.0) {
        // Gradient condition: m - y = tau * y / |y|.
        const cxd dir = y(r, c) / std::abs(y(r, c));
        REQUIRE(std::abs(diff - tau * dir) < 1e-12);
      } else {
        REQUIRE(std::abs(m(r, c)) <= tau + 1e-12);
      }
    }
}

TEST_CASE("soft threshold minimizes its proximal objective") {
  Rng rng(52);
  const CMatrix m = random_cmatrix(rng, 4, 4);
  const double tau = 0.6;
  const CMatrix y = soft_threshold(m, tau);
  auto obj = [&](const CMatrix& z) {
    return 0.5 * (m - z).squaredNorm() + tau * z.cwiseAbs().sum();
  };
  const double at_y = obj(y);
  for (int rep = 0; rep < 30; ++rep) {
    const CMatrix z = y + 0.05 * random_cmatrix(rng, 4, 4);
    REQUIRE(obj(z) >= at_y - 1e-12);
  }
}

TEST_CASE("svt shrinks known singular values") {
  Rng rng(53);
  const CMatrix u = random_unitary(rng, 6);
  const CMatrix v = random_unitary(rng, 4);
  RVector sig(4);
  sig << 3.0, 1.0, 0.2, 0.0;
  CMatrix m = u.leftCols(4) * sig.asDiagonal() * v.adjoint();
  const CMatrix y = svt(m, 0.5);
  Eigen::JacobiSVD<CMatrix> check(y);
  const RVector s = check.singularValues();
  REQUIRE(std::abs(s(0) - 2.5) < 1e-10);
  REQUIRE(std::abs(s(1) - 0.5) < 1e-10);
  REQUIRE(s(2) < 1e-10);
  REQUIRE(s(3) < 1e-10);

  REQUIRE(rel_frob(svt(m, 0.0), m) < 1e-12);
  REQUIRE(svt(m, 4.0).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE_THROWS_AS(svt(m, -1.0), ValidationError);
}

TEST_CASE("svt output satisfies the nuclear-norm subgradient conditions") {
  Rng rng(54);
  const CMatrix m = random_cmatrix(rng, 6, 4);
  const double tau = 0.5;
  const CMatrix y = svt(m, tau);
  const CMatrix d = (m - y) / tau;  // must lie in the subdifferential at y

  Eigen::JacobiSVD<CMatrix> ysvd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector s = ysvd.singularValues();
  Index rank = 0;
  while (rank < s.size() && s(rank) > 1e-10) ++rank;
  REQUIRE(rank > 0);
  const CMatrix u1 = ysvd.matrixU().leftCols(rank);
  const CMatrix v1 = ysvd.matrixV().leftCols(rank);

  // On the support, d aligns with the singular subspaces of y.
  REQUIRE(rel_frob(u1.adjoint() * d * v1, CMatrix::Identity(rank, rank)) < 1e-10);
  // Cross terms vanish.
  const CMatrix pu = CMatrix::Identity(6, 6) - u1 * u1.adjoint();
  const CMatrix pv = CMatrix::Identity(4, 4) - v1 * v1.adjoint();
  REQUIRE((u1.adjoint() * d * pv).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE((pu * d * v1).cwiseAbs().maxCoeff() < 1e-10);
  // Off-support block is a contraction.
  REQUIRE(opnorm(pu * d * pv) <= 1.0 + 1e-10);
  REQUIRE(opnorm(d) <= 1.0 + 1e-10);
}

TEST_CASE("svt minimizes its proximal objective") {
  Rng rng(55);
  const CMatrix m = random_cmatrix(rng, 5, 5);
  const double tau = 0.7;
  const CMatrix y = svt(m, tau);
  auto nuclear = [](const CMatrix& z) {
    Eigen::JacobiSVD<CMatrix> svd(z);
    return svd.singularValues().sum();
  };
  auto obj = [&](const CMatrix& z) {
    return 0.5 * (m - z).squaredNorm() + tau * nuclear(z);
  };
  const double at_y = obj(y);
  for (int rep = 0; rep < 20; ++rep) {
    const CMatrix z = y + 0.05 * random_cmatrix(rng, 5, 5);
    REQUIRE(obj(z) >= at_y - 1e-12);
  }
}

TEST_CASE("svt_with_norm reports the nuclear norm of its output") {
  Rng rng(56);
  const CMatrix m = random_cmatrix(rng, 6, 5);
  const SvtResult res = svt_with_norm(m, 0.4);
  Eigen::JacobiSVD<CMatrix> svd(res.value);
  REQUIRE(std::abs(res.nuclear_norm - svd.singularValues().sum()) < 1e-10);
}

TEST_CASE("deterministic svd fixes the factor gauge and reconstructs") {
  Rng rng(57);
  const CMatrix m = random_cmatrix(rng, 6, 4);
  const SvdFactors f = deterministic_svd(m);
  REQUIRE(rel_frob(f.u * f.sigma.asDiagonal() * f.v.adjoint(), m) < 1e-12);
  for (Index k = 0; k < f.u.cols(); ++k) {
    Index lead = 0;
    while (lead < f.u.rows() && std::abs(f.u(lead, k)) == 0.0) ++lead;
    REQUIRE(lead < f.u.rows());
    REQUIRE(f.u(lead, k).imag() == 0.0);
    REQUIRE(f.u(lead, k).real() > 0.0);
  }
  const SvdFactors g = deterministic_svd(m);
  REQUIRE((f.u - g.u).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((f.v - g.v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("prox operators reject non-finite input") {
  CMatrix bad(1, 1);
  bad(0, 0) = cxd(std::numeric_limits<double>::quiet_NaN(), 0.0);
  REQUIRE_THROWS_AS(soft_threshold(bad, 0.1), NumericalError);
  REQUIRE_THROWS_AS(svt(bad, 0.1), NumericalError);
}
