#pragma once

// Synthetic data generation: scenes with a smooth low-rank background
// plus point targets, deterministic phase-error screens, exact-SNR
// noise injection, and pulse undersampling patterns. Everything is
// driven by explicit seeds so datasets regenerate bit-exactly.

#include "lrsar/common.hpp"
#include "lrsar/linops.hpp"
#include "lrsar/metrics.hpp"
#include "lrsar/rng.hpp"

#include <cstdint>

namespace lrsar {

enum class BackgroundKind { none, rank_smooth };
enum class PhaseErrorKind { none, quadratic, uniform_random };
enum class SamplingKind { uniform_random, decimate };

struct SceneSpec {
  Index side = 64;
  Index n_targets = 4;
  double target_amp = 10.0;  // relative to the unit-RMS background
  BackgroundKind background = BackgroundKind::rank_smooth;
  Index rank = 2;
  Index smooth_harmonics = 3;
  std::uint64_t seed = 1;

  void validate() const {
    require(side >= 2, "SceneSpec: side must be at least 2");
    require(n_targets >= 0 && n_targets <= side * side,
            "SceneSpec: target count out of range");
    require(target_amp > 0.0, "SceneSpec: target_amp must be positive");
    require(rank >= 1, "SceneSpec: rank must be positive");
    require(smooth_harmonics >= 1, "SceneSpec: smooth_harmonics must be positive");
  }
};

struct Scene {
  CMatrix image;
  CMatrix background;
  PixelList targets;
};

namespace detail {

// Slowly varying positive-mean profile: a unit offset plus a few random
// low harmonics with 1/q amplitude decay.
inline RVector smooth_factor(Index n, Index harmonics, Rng& rng) {
  RVector f = RVector::Ones(n);
  for (Index q = 1; q <= harmonics; ++q) {
    const double amp = 0.5 * rng.normal() / static_cast<double>(q);
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    for (Index i = 0; i < n; ++i)
      f(i) += amp * std::cos(2.0 * kPi * static_cast<double>(q) *
                                 (static_cast<double>(i) + 0.5) / static_cast<double>(n) +
                             phase);
  }
  return f;
}

}  // namespace detail

// Background RMS is normalized to one, so target_amp is the peak target
// magnitude in background-RMS units. Without a background, targets have
// magnitude target_amp on a zero canvas.
inline Scene gen_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Scene scene;
  scene.background = CMatrix::Zero(spec.side, spec.side);

  if (spec.background == BackgroundKind::rank_smooth) {
    Rng bg_rng = rng.fork(0x6267);
    RMatrix b = RMatrix::Zero(spec.side, spec.side);
    for (Index h = 0; h < spec.rank; ++h) {
      const RVector u = detail::smooth_factor(spec.side, spec.smooth_harmonics, bg_rng);
      const RVector v = detail::smooth_factor(spec.side, spec.smooth_harmonics, bg_rng);
      b += u * v.transpose();
    }
    const double rms = std::sqrt(b.squaredNorm() / static_cast<double>(spec.side * spec.side));
    require(rms > 0.0, "gen_scene: degenerate background");
    scene.background = (b / rms).cast<cxd>();
  }

  scene.image = scene.background;
  if (spec.n_targets > 0) {
    Rng tg_rng = rng.fork(0x7467);
    const IndexList flat = tg_rng.sample_indices(spec.side * spec.side, spec.n_targets);
    for (Index idx : flat) {
      const Pixel p{idx % spec.side, idx / spec.side};
      scene.targets.push_back(p);
      scene.image(p.row, p.col) += cxd(spec.target_amp, 0.0);
    }
  }
  return scene;
}

// Quadratic screens hit peak_rad exactly at the aperture edge i = 0 and
// vanish at the centre i = m/2:  phi_i = peak * ((i - m/2)/(m/2))^2.
inline RVector gen_phase_error(PhaseErrorKind kind, double peak_rad, Index m,
                               std::uint64_t seed) {
  require(m >= 1, "gen_phase_error: m must be positive");
  RVector phi = RVector::Zero(m);
  switch (kind) {
    case PhaseErrorKind::none:
      break;
    case PhaseErrorKind::quadratic: {
      const double half = static_cast<double>(m) / 2.0;
      for (Index i = 0; i < m; ++i) {
        const double t = (static_cast<double>(i) - half) / half;
        phi(i) = peak_rad * t * t;
      }
      break;
    }
    case PhaseErrorKind::uniform_random: {
      Rng rng(seed);
      for (Index i = 0; i < m; ++i) phi(i) = rng.uniform(-peak_rad, peak_rad);
      break;
    }
  }
  return phi;
}

// Adds circular complex white noise scaled so the empirical SNR in dB is
// hit exactly: 20 log10(||R|| / ||N||) == snr_db.
inline CMatrix add_noise(const CMatrix& r, double snr_db, std::uint64_t seed) {
  require_finite(r, "add_noise");
  const double signal = r.norm();
  require(signal > 0.0, "add_noise: signal is identically zero");
  Rng rng(seed);
  CMatrix z = rng.cnormal_matrix(r.rows(), r.cols());
  const double zn = z.norm();
  require(zn > 0.0, "add_noise: degenerate noise draw");
  const double sigma = signal / (zn * std::pow(10.0, snr_db / 20.0));
  return r + sigma * z;
}

// Pulse subset covering floor(ratio * full) rows.
inline Selector gen_undersampler(Index full, double ratio, SamplingKind kind,
                                 std::uint64_t seed) {
  require(full >= 1, "gen_undersampler: full must be positive");
  require(ratio > 0.0 && ratio <= 1.0, "gen_undersampler: ratio must lie in (0, 1]");
  const Index m = std::max<Index>(1, static_cast<Index>(ratio * static_cast<double>(full)));
  if (m == full) return Selector::identity(full);
  IndexList kept;
  if (kind == SamplingKind::uniform_random) {
    Rng rng(seed);
    kept = rng.sample_indices(full, m);
  } else {
    kept.reserve(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) kept.push_back(i * full / m);
  }
  return Selector(full, std::move(kept));
}

}  // namespace lrsar
