#include "lrsar/linops.hpp"
#include "lrsar/rng.hpp"
#include "support/test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace lrsar;
using lrsar::testing::forward_matrix_by_basis;
using lrsar::testing::random_cmatrix;
using lrsar::testing::rel_frob;
using lrsar::testing::slow_forward;

namespace {

ForwardModel make_model(Index side, Index na, Index nr, Index ma, Index mr, Rng& rng,
                        bool with_phase) {
  FourierDictionary da = build_partial_dft(na, side, RowSelection::centered);
  FourierDictionary dr = build_partial_dft(nr, side, RowSelection::centered);
  Selector sa(na, rng.sample_indices(na, ma));
  Selector sr(nr, rng.sample_indices(nr, mr));
  RVector phases = RVector::Zero(ma);
  if (with_phase)
    for (Index i = 0; i < ma; ++i) phases(i) = rng.uniform(-kPi, kPi);
  return ForwardModel(da, dr, sa, sr, PhaseDiagonal(phases));
}

}  // namespace

TEST_CASE("centered row selection keeps lowest absolute frequencies") {
  REQUIRE(centered_rows(5, 8) == IndexList{0, 1, 2, 6, 7});
  REQUIRE(centered_rows(4, 8) == IndexList{0, 1, 2, 7});   // +2 beats -2 on the tie
  REQUIRE(centered_rows(3, 4) == IndexList{0, 1, 3});
  REQUIRE(centered_rows(1, 8) == IndexList{0});
  REQUIRE(centered_rows(8, 8) == IndexList{0, 1, 2, 3, 4, 5, 6, 7});
  REQUIRE(centered_rows(3, 5) == IndexList{0, 1, 4});
}

TEST_CASE("partial DFT entries follow the unitary convention") {
  const FourierDictionary d = build_partial_dft(4, 8, RowSelection::lowpass);
  REQUIRE(d.rows == IndexList{0, 1, 2, 3});
  const double s = 1.0 / std::sqrt(8.0);
  for (Index k = 0; k < 4; ++k)
    for (Index l = 0; l < 8; ++l) {
      const double ang = -2.0 * kPi * double(k) * double(l) / 8.0;
      REQUIRE(std::abs(d.matrix(k, l) - s * cxd(std::cos(ang), std::sin(ang))) < 1e-15);
    }
  // Row 0 applied to an impulse gives a flat response of 1/sqrt(n).
  CVector impulse = CVector::Zero(8);
  impulse(0) = 1.0;
  const CVector resp = d.matrix * impulse;
  for (Index k = 0; k < 4; ++k) REQUIRE(std::abs(resp(k) - cxd(s, 0.0)) < 1e-15);
}

TEST_CASE("dictionary rows are orthonormal for any selection") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n_full = 4 + rng.uniform_index(29);
    const Index n_sel = 1 + rng.uniform_index(n_full);
    const auto kind = rep % 2 == 0 ? RowSelection::centered : RowSelection::lowpass;
    const FourierDictionary d = build_partial_dft(n_sel, n_full, kind);
    const CMatrix gram = d.matrix * d.matrix.adjoint();
    REQUIRE((gram - CMatrix::Identity(n_sel, n_sel)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("explicit row selection validates its input") {
  REQUIRE_THROWS_AS(build_partial_dft(IndexList{0, 0, 2}, 8), ValidationError);
  REQUIRE_THROWS_AS(build_partial_dft(IndexList{0, 8}, 8), ValidationError);
  REQUIRE_THROWS_AS(build_partial_dft(IndexList{-1, 2}, 8), ValidationError);
  REQUIRE_THROWS_AS(build_partial_dft(IndexList{}, 8), ValidationError);
  const FourierDictionary d = build_partial_dft(IndexList{5, 1, 3}, 8);
  REQUIRE(d.rows == IndexList{1, 3, 5});
  REQUIRE_THROWS_AS(build_partial_dft(0, 8, RowSelection::centered), ValidationError);
  REQUIRE_THROWS_AS(build_partial_dft(9, 8, RowSelection::centered), ValidationError);
}

TEST_CASE("selector pick and scatter are adjoint and validate bounds") {
  Rng rng(3);
  const Selector sel(10, IndexList{1, 4, 9});
  const CMatrix x = random_cmatrix(rng, 10, 5);
  const CMatrix y = random_cmatrix(rng, 3, 5);
  const cxd lhs = (sel.pick_rows(x).array().conjugate() * y.array()).sum();
  const cxd rhs = (x.array().conjugate() * sel.scatter_rows(y).array()).sum();
  REQUIRE(std::abs(lhs - rhs) < 1e-12);
  REQUIRE(rel_frob(sel.pick_rows(sel.scatter_rows(y)), y) < 1e-15);

  REQUIRE_THROWS_AS(Selector(5, IndexList{2, 2}), ValidationError);
  REQUIRE_THROWS_AS(Selector(5, IndexList{3, 1}), ValidationError);
  REQUIRE_THROWS_AS(Selector(5, IndexList{5}), ValidationError);
  REQUIRE_THROWS_AS(Selector(5, IndexList{}), ValidationError);
}

TEST_CASE("phase diagonal applies unit-modulus factors and inverts by conjugation") {
  Rng rng(4);
  RVector ph(3);
  ph << 0.3, -1.2, 2.9;
  const PhaseDiagonal pd(ph);
  const CVector f = pd.factors();
  for (Index i = 0; i < 3; ++i) REQUIRE(std::abs(std::abs(f(i)) - 1.0) < 1e-15);
  const CMatrix r = random_cmatrix(rng, 3, 4);
  REQUIRE(rel_frob(pd.apply_rows_conj(pd.apply_rows(r)), r) < 1e-15);
}

TEST_CASE("forward model validates factor dimensions with named messages") {
  Rng rng(5);
  const FourierDictionary da = build_partial_dft(6, 8, RowSelection::centered);
  const FourierDictionary dr = build_partial_dft(5, 8, RowSelection::centered);
  const Selector sa(6, IndexList{0, 2, 4});
  const Selector sr(5, IndexList{1, 3});
  REQUIRE_NOTHROW(ForwardModel(da, dr, sa, sr, PhaseDiagonal::identity(3)));
  REQUIRE_THROWS_WITH(ForwardModel(da, dr, Selector(5, IndexList{0}), sr,
                                   PhaseDiagonal::identity(1)),
                      Catch::Matchers::ContainsSubstring("azimuth selector"));
  REQUIRE_THROWS_WITH(ForwardModel(da, dr, sa, Selector(6, IndexList{0}),
                                   PhaseDiagonal::identity(3)),
                      Catch::Matchers::ContainsSubstring("range selector"));
  REQUIRE_THROWS_WITH(ForwardModel(da, dr, sa, sr, PhaseDiagonal::identity(2)),
                      Catch::Matchers::ContainsSubstring("phase"));
  const FourierDictionary dother = build_partial_dft(6, 10, RowSelection::centered);
  REQUIRE_THROWS_WITH(ForwardModel(da, dother, sa, Selector(6, IndexList{0, 1}),
                                   PhaseDiagonal::identity(3)),
                      Catch::Matchers::ContainsSubstring("scene side"));
}

TEST_CASE("forward agrees with the scalar-loop definition") {
  Rng rng(21);
  for (int rep = 0; rep < 5; ++rep) {
    ForwardModel m = make_model(6, 5, 6, 3, 4, rng, true);
    const CMatrix x = random_cmatrix(rng, 6, 6);
    REQUIRE(rel_frob(m.forward(x), slow_forward(m, x)) < 1e-13);
  }
}

TEST_CASE("forward and adjoint satisfy the inner-product identity") {
  Rng rng(22);
  for (int rep = 0; rep < 10; ++rep) {
    ForwardModel m = make_model(8, 6, 7, 4, 5, rng, true);
    const CMatrix x = random_cmatrix(rng, 8, 8);
    const CMatrix r = random_cmatrix(rng, 4, 5);
    const cxd lhs = (m.forward(x).array().conjugate() * r.array()).sum();
    const cxd rhs = (x.array().conjugate() * m.adjoint(r).array()).sum();
    REQUIRE(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("dense forward matrix matches basis assembly and vec convention") {
  Rng rng(23);
  ForwardModel m = make_model(5, 4, 5, 3, 3, rng, true);
  const CMatrix e_kron = dense_forward_matrix(m);
  const CMatrix e_basis = forward_matrix_by_basis(m);
  REQUIRE(rel_frob(e_kron, e_basis) < 1e-13);
  const CMatrix x = random_cmatrix(rng, 5, 5);
  const CVector lhs = e_kron * vec(x);
  const CVector rhs = vec(m.forward(x));
  REQUIRE((lhs - rhs).norm() / rhs.norm() < 1e-13);
}

TEST_CASE("measurement-side unitarity: E E^H is the identity") {
  Rng rng(24);
  for (int rep = 0; rep < 6; ++rep) {
    const Index side = 8 + 4 * (rep % 3);
    ForwardModel m = make_model(side, side - rep % 2, side, 5, 6, rng, true);
    const CMatrix e = dense_forward_matrix(m);
    const CMatrix gram = e * e.adjoint();
    REQUIRE((gram - CMatrix::Identity(e.rows(), e.rows())).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("scene-side gram is an idempotent Hermitian projector") {
  Rng rng(25);
  ForwardModel m = make_model(8, 7, 8, 4, 5, rng, true);
  const CMatrix e = dense_forward_matrix(m);
  const CMatrix g = e.adjoint() * e;
  REQUIRE(rel_frob(g * g, g) < 1e-12);
  REQUIRE(rel_frob(g.adjoint(), g) < 1e-12);
  const CMatrix x = random_cmatrix(rng, 8, 8);
  REQUIRE(rel_frob(m.gram(m.gram(x)), m.gram(x)) < 1e-12);
}

TEST_CASE("adjoint of a one-hot measurement reprojects to itself") {
  Rng rng(26);
  ForwardModel m = make_model(8, 8, 8, 5, 4, rng, false);
  CMatrix r0 = CMatrix::Zero(5, 4);
  r0(2, 1) = cxd(1.0, -0.5);
  REQUIRE(rel_frob(m.forward(m.adjoint(r0)), r0) < 1e-12);
}

TEST_CASE("phase screen can be removed after projection") {
  Rng rng(27);
  ForwardModel m = make_model(8, 6, 8, 4, 6, rng, true);
  const CMatrix x = random_cmatrix(rng, 8, 8);
  const CMatrix with_phase = m.forward(x);
  const CMatrix stripped = m.phase().apply_rows_conj(with_phase);
  REQUIRE(rel_frob(stripped, m.with_identity_phase().forward(x)) < 1e-13);
}

TEST_CASE("kron follows the column-major vec identity") {
  Rng rng(28);
  const CMatrix a = random_cmatrix(rng, 3, 4);
  const CMatrix b = random_cmatrix(rng, 2, 5);
  const CMatrix x = random_cmatrix(rng, 5, 4);
  // vec(B X A^T) = (A kron B) vec(X)
  const CVector lhs = vec(CMatrix(b * x * a.transpose()));
  const CVector rhs = kron(a, b) * vec(x);
  REQUIRE((lhs - rhs).norm() / lhs.norm() < 1e-13);
}
