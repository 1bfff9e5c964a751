#pragma once

#include <cstdint>
#include <vector>

#include "cch/distance.hpp"
#include "cch/nsw.hpp"

namespace cch {

struct VolumeEstimate {
  double volume_lower = 0.0;  // counting only points with upper bracket < r
  double volume_upper = 0.0;  // counting points with lower bracket < r
  double estimate = 0.0;      // midpoint of the two
  double mc_halfwidth = 0.0;  // 1.96 sigma Monte-Carlo confidence, midpoint count
  std::size_t samples = 0;
};

// Hit-or-miss estimate of |B(x,r)| over the Euclidean bounding box of the
// metric ball. Deterministic for a fixed seed and independent of threading
// (fixed 65536-sample chunks with per-chunk derived generators, integer
// counts combined in chunk order). Throws InconclusiveVolume when the
// bracket-induced gap exceeds half of the estimate.
VolumeEstimate ball_volume(const PointDistanceOracle& oracle, double r, std::size_t n_samples,
                           std::uint64_t seed);

// Least-squares slope of log |B(x,r)| against log r.
double fitted_volume_exponent(const std::vector<double>& radii,
                              const std::vector<double>& volumes);

struct ComparabilityRow {
  Point x;
  double r = 0.0;
  double lambda = 0.0;
  double volume_lower = 0.0, volume_upper = 0.0;
  double ratio = 0.0;  // |B| / Lambda at the midpoint estimate
};

struct ComparabilityReport {
  std::vector<ComparabilityRow> rows;
  double ratio_min = 0.0, ratio_max = 0.0;  // the nsw2 bracket constants
  double doubling_c0 = 0.0;  // smallest C0 with C0 (r/s)^Q <= |B(x,r)|/|B(x,s)|
  bool rescaling_ok = false; // lambdarescale verified to 1e-9
};

struct ComparabilityOptions {
  std::size_t mc_samples = 200000;
  std::uint64_t seed = 1;
  int oracle_cells_per_radius = 16;
  std::vector<double> ts = {0.125, 0.25, 0.5, 0.75, 1.0};
};

// Fits the constants of the volume/polynomial comparability, the doubling
// bound, and checks the exact rescaling bracket at each sample.
ComparabilityReport comparability_report(const CommutatorBasis& basis,
                                         std::shared_ptr<const VectorFieldSystem> sys,
                                         const std::vector<Point>& samples,
                                         const std::vector<double>& radii,
                                         const ComparabilityOptions& opts = {});

}  // namespace cch
