#pragma once

// Quality and timing metrics: image sharpness (entropy), phase estimation
// error modulo the unobservable constant offset, target-support F1, and a
// small median-of-repeats wall-clock helper.

#include "lrsar/common.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <vector>

namespace lrsar {

struct Pixel {
  Index row = 0;
  Index col = 0;
  friend bool operator==(const Pixel& a, const Pixel& b) {
    return a.row == b.row && a.col == b.col;
  }
  friend bool operator<(const Pixel& a, const Pixel& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  }
};

using PixelList = std::vector<Pixel>;

// Shannon entropy of the normalized intensity distribution |x|^2 / E.
// Zero pixels contribute nothing; an all-zero image has no distribution
// and is rejected. A uniform image attains the maximum ln(rows*cols).
inline double image_entropy(const CMatrix& x) {
  require_finite(x, "image_entropy");
  const double energy = x.cwiseAbs2().sum();
  if (energy <= 0.0) throw ValidationError("image_entropy: image is identically zero");
  double h = 0.0;
  for (Index c = 0; c < x.cols(); ++c)
    for (Index r = 0; r < x.rows(); ++r) {
      const double p = std::norm(x(r, c)) / energy;
      if (p > 0.0) h -= p * std::log(p);
    }
  return h;
}

// Mean squared phase residual after removing the best constant offset
// (circular mean of the wrapped differences). Invariant to a global
// shift of either argument and to 2*pi wraps.
inline double phase_mse(const RVector& estimate, const RVector& truth) {
  require(estimate.size() == truth.size(), "phase_mse: length mismatch");
  require(estimate.size() > 0, "phase_mse: empty input");
  require_finite(estimate, "phase_mse estimate");
  require_finite(truth, "phase_mse truth");
  cxd mean(0.0, 0.0);
  for (Index i = 0; i < estimate.size(); ++i) {
    const double d = estimate(i) - truth(i);
    mean += cxd(std::cos(d), std::sin(d));
  }
  const double offset = mean == cxd(0.0, 0.0) ? 0.0 : std::arg(mean);
  double acc = 0.0;
  for (Index i = 0; i < estimate.size(); ++i) {
    const double d = wrap_angle(estimate(i) - truth(i) - offset);
    acc += d * d;
  }
  return acc / static_cast<double>(estimate.size());
}

// Detection F1 against known target pixels. A pixel is detected when its
// magnitude reaches rel_threshold times the image peak; an all-zero image
// yields no detections and scores zero.
inline double support_f1(const CMatrix& s, const PixelList& truth, double rel_threshold) {
  require(rel_threshold > 0.0 && rel_threshold <= 1.0,
          "support_f1: rel_threshold must lie in (0, 1]");
  require(!truth.empty(), "support_f1: empty truth set");
  for (const Pixel& p : truth)
    require(p.row >= 0 && p.row < s.rows() && p.col >= 0 && p.col < s.cols(),
            "support_f1: truth pixel out of range");
  const double peak = s.cwiseAbs().maxCoeff();
  if (peak <= 0.0) return 0.0;
  const double gate = rel_threshold * peak;
  PixelList sorted_truth = truth;
  std::sort(sorted_truth.begin(), sorted_truth.end());
  Index tp = 0, fp = 0;
  for (Index c = 0; c < s.cols(); ++c)
    for (Index r = 0; r < s.rows(); ++r)
      if (std::abs(s(r, c)) >= gate) {
        const bool hit = std::binary_search(sorted_truth.begin(), sorted_truth.end(),
                                            Pixel{r, c});
        (hit ? tp : fp) += 1;
      }
  const Index fn = static_cast<Index>(truth.size()) - tp;
  const double denom = static_cast<double>(2 * tp + fp + fn);
  return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

struct BenchResult {
  double median_ms = 0.0;
  double per_iter_ms = 0.0;
  Index iterations = 0;
  std::vector<double> samples_ms;
};

// Times `run` (which reports its iteration count) `repeats` times after
// one discarded warm-up call and reports the median.
inline BenchResult bench(const std::function<Index()>& run, int repeats) {
  require(repeats >= 1, "bench: repeats must be positive");
  BenchResult res;
  run();  // warm-up, not recorded
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    res.iterations = run();
    const auto t1 = std::chrono::steady_clock::now();
    res.samples_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::vector<double> sorted = res.samples_ms;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  res.median_ms = sorted.size() % 2 == 1 ? sorted[mid]
                                         : 0.5 * (sorted[mid - 1] + sorted[mid]);
  res.per_iter_ms = res.iterations > 0
                        ? res.median_ms / static_cast<double>(res.iterations)
                        : res.median_ms;
  return res;
}

}  // namespace lrsar
