#pragma once

// Measurement operator for 2-D radar imaging.
//
// A square complex scene X (side x side) is observed through separable
// partial Fourier dictionaries in azimuth and range, binary row/column
// selection (undersampling), and a per-pulse phase screen:
//
//   R = diag(exp(j*phi)) * Sel_a(Fa) * X * (Sel_r(Fr))^T
//
// where Fa, Fr hold selected rows of the full unitary DFT. Rows of any
// such dictionary stay orthonormal, so the composite operator E obeys
// E E^H = I on the measurement side; the solvers lean on that identity.

#include "lrsar/common.hpp"

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

namespace lrsar {

enum class RowSelection { centered, lowpass };

// Rows of the full n_full-point unitary DFT, kept in ascending row order.
struct FourierDictionary {
  CMatrix matrix;   // n_selected x n_full
  IndexList rows;   // source row of each dictionary row
  Index full_size = 0;

  Index selected() const { return matrix.rows(); }
};

namespace detail {

inline CMatrix dft_rows(const IndexList& rows, Index n_full) {
  CMatrix m(static_cast<Index>(rows.size()), n_full);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_full));
  for (Index s = 0; s < m.rows(); ++s) {
    const double k = static_cast<double>(rows[static_cast<std::size_t>(s)]);
    for (Index l = 0; l < n_full; ++l) {
      const double ang = -2.0 * kPi * k * static_cast<double>(l) / static_cast<double>(n_full);
      m(s, l) = scale * cxd(std::cos(ang), std::sin(ang));
    }
  }
  return m;
}

}  // namespace detail

// The n_selected rows of smallest absolute signed frequency; a tie between
// +f and -f keeps the positive one first. Row indices come back ascending.
inline IndexList centered_rows(Index n_selected, Index n_full) {
  std::vector<Index> order(static_cast<std::size_t>(n_full));
  std::iota(order.begin(), order.end(), Index{0});
  auto freq = [n_full](Index k) { return k <= n_full / 2 ? k : k - n_full; };
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Index fa = freq(a), fb = freq(b);
    if (std::abs(fa) != std::abs(fb)) return std::abs(fa) < std::abs(fb);
    return fa > fb;  // positive frequency wins the tie
  });
  IndexList kept(order.begin(), order.begin() + n_selected);
  std::sort(kept.begin(), kept.end());
  return kept;
}

inline FourierDictionary build_partial_dft(Index n_selected, Index n_full, RowSelection sel) {
  require(n_full >= 1, "build_partial_dft: n_full must be positive");
  require(n_selected >= 1 && n_selected <= n_full,
          "build_partial_dft: need 1 <= n_selected <= n_full");
  IndexList rows;
  if (sel == RowSelection::centered) {
    rows = centered_rows(n_selected, n_full);
  } else {
    rows.resize(static_cast<std::size_t>(n_selected));
    std::iota(rows.begin(), rows.end(), Index{0});
  }
  return FourierDictionary{detail::dft_rows(rows, n_full), rows, n_full};
}

// Explicit row list; duplicates or out-of-range rows are rejected.
inline FourierDictionary build_partial_dft(IndexList rows, Index n_full) {
  require(n_full >= 1, "build_partial_dft: n_full must be positive");
  require(!rows.empty() && static_cast<Index>(rows.size()) <= n_full,
          "build_partial_dft: need 1 <= #rows <= n_full");
  std::sort(rows.begin(), rows.end());
  require(rows.front() >= 0 && rows.back() < n_full,
          "build_partial_dft: row index out of range");
  require(std::adjacent_find(rows.begin(), rows.end()) == rows.end(),
          "build_partial_dft: duplicate row index");
  return FourierDictionary{detail::dft_rows(rows, n_full), rows, n_full};
}

// Keeps a strictly increasing subset of rows (or columns when transposed).
struct Selector {
  Index full_size = 0;
  IndexList kept;

  Selector() = default;
  Selector(Index full, IndexList kept_rows) : full_size(full), kept(std::move(kept_rows)) {
    require(full_size >= 1, "Selector: full_size must be positive");
    require(!kept.empty(), "Selector: kept set must be non-empty");
    for (std::size_t i = 0; i < kept.size(); ++i) {
      require(kept[i] >= 0 && kept[i] < full_size, "Selector: index out of range");
      if (i > 0) require(kept[i] > kept[i - 1], "Selector: indices must be strictly increasing");
    }
  }

  static Selector identity(Index n) {
    IndexList all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), Index{0});
    return Selector(n, std::move(all));
  }

  Index selected() const { return static_cast<Index>(kept.size()); }

  CMatrix pick_rows(const CMatrix& x) const {
    require(x.rows() == full_size, "Selector: row count mismatch");
    CMatrix y(selected(), x.cols());
    for (Index i = 0; i < selected(); ++i) y.row(i) = x.row(kept[static_cast<std::size_t>(i)]);
    return y;
  }

  // Adjoint of pick_rows: scatter back, zeros elsewhere.
  CMatrix scatter_rows(const CMatrix& y) const {
    require(y.rows() == selected(), "Selector: row count mismatch in scatter");
    CMatrix x = CMatrix::Zero(full_size, y.cols());
    for (Index i = 0; i < selected(); ++i) x.row(kept[static_cast<std::size_t>(i)]) = y.row(i);
    return x;
  }
};

// Unit-modulus per-row phase factors exp(j*phi_i).
struct PhaseDiagonal {
  RVector phases;

  PhaseDiagonal() = default;
  explicit PhaseDiagonal(RVector p) : phases(std::move(p)) {
    require_finite(phases, "PhaseDiagonal");
  }

  static PhaseDiagonal identity(Index n) { return PhaseDiagonal(RVector::Zero(n)); }

  Index size() const { return phases.size(); }

  CVector factors() const {
    CVector f(phases.size());
    for (Index i = 0; i < phases.size(); ++i)
      f(i) = cxd(std::cos(phases(i)), std::sin(phases(i)));
    return f;
  }

  CMatrix apply_rows(const CMatrix& r) const {
    require(r.rows() == phases.size(), "PhaseDiagonal: row count mismatch");
    return factors().asDiagonal() * r;
  }

  CMatrix apply_rows_conj(const CMatrix& r) const {
    require(r.rows() == phases.size(), "PhaseDiagonal: row count mismatch");
    return factors().conjugate().asDiagonal() * r;
  }
};

// Full observation operator; scenes are square, side() x side().
class ForwardModel {
 public:
  ForwardModel(FourierDictionary dict_az, FourierDictionary dict_rg,
               Selector sel_az, Selector sel_rg, PhaseDiagonal phase)
      : dict_az_(std::move(dict_az)),
        dict_rg_(std::move(dict_rg)),
        sel_az_(std::move(sel_az)),
        sel_rg_(std::move(sel_rg)),
        phase_(std::move(phase)) {
    require(dict_az_.full_size == dict_rg_.full_size,
            "ForwardModel: azimuth and range dictionaries must share the scene side");
    require(sel_az_.full_size == dict_az_.selected(),
            "ForwardModel: azimuth selector size must match azimuth dictionary rows");
    require(sel_rg_.full_size == dict_rg_.selected(),
            "ForwardModel: range selector size must match range dictionary rows");
    require(phase_.size() == sel_az_.selected(),
            "ForwardModel: phase vector must have one entry per kept pulse");
    az_sel_ = sel_az_.pick_rows(dict_az_.matrix);
    rg_sel_ = sel_rg_.pick_rows(dict_rg_.matrix);
  }

  Index side() const { return dict_az_.full_size; }
  Index pulses() const { return sel_az_.selected(); }       // M_a
  Index range_bins() const { return sel_rg_.selected(); }   // M_r
  Index measurements() const { return pulses() * range_bins(); }

  const FourierDictionary& dict_az() const { return dict_az_; }
  const FourierDictionary& dict_rg() const { return dict_rg_; }
  const Selector& sel_az() const { return sel_az_; }
  const Selector& sel_rg() const { return sel_rg_; }
  const PhaseDiagonal& phase() const { return phase_; }

  // Selected sub-dictionaries with the selector folded in.
  const CMatrix& azimuth_rows() const { return az_sel_; }   // M_a x side
  const CMatrix& range_rows() const { return rg_sel_; }     // M_r x side

  void set_phases(RVector phases) {
    require(phases.size() == pulses(), "set_phases: wrong length");
    phase_ = PhaseDiagonal(std::move(phases));
  }

  ForwardModel with_identity_phase() const {
    ForwardModel m = *this;
    m.phase_ = PhaseDiagonal::identity(pulses());
    return m;
  }

  CMatrix forward(const CMatrix& x) const {
    require(x.rows() == side() && x.cols() == side(), "forward: scene must be side x side");
    return phase_.apply_rows(az_sel_ * x * rg_sel_.transpose());
  }

  CMatrix adjoint(const CMatrix& r) const {
    require(r.rows() == pulses() && r.cols() == range_bins(),
            "adjoint: data must be pulses x range_bins");
    return az_sel_.adjoint() * phase_.apply_rows_conj(r) * rg_sel_.conjugate();
  }

  // E^H E, an orthogonal projector on scene space.
  CMatrix gram(const CMatrix& x) const { return adjoint(forward(x)); }

 private:
  FourierDictionary dict_az_;
  FourierDictionary dict_rg_;
  Selector sel_az_;
  Selector sel_rg_;
  PhaseDiagonal phase_;
  CMatrix az_sel_;
  CMatrix rg_sel_;
};

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

// Dense M x I matrix of the composite operator, column-major scene
// vectorization. Intended for oracle checks at small sizes.
inline CMatrix dense_forward_matrix(const ForwardModel& m) {
  const CMatrix az = m.phase().factors().asDiagonal() * m.azimuth_rows();
  return kron(m.range_rows(), az);
}

}  // namespace lrsar
