#pragma once

#include <memory>
#include <vector>

#include "cch/eikonal.hpp"
#include "cch/lattice.hpp"

namespace cch {

struct DistanceBracket {
  double lower = 0.0;
  double upper = 0.0;
  double mid() const { return 0.5 * (lower + upper); }
  double gap() const { return upper - lower; }
};

// Distances from one fixed base point. Brackets are numerical-confidence
// intervals: the lower side additionally respects the analytic bound
// |x-y| / sup ||B||, the upper side inflates the eikonal value by its
// measured residual. CC distances are never claimed exact.
class PointDistanceOracle {
 public:
  virtual ~PointDistanceOracle() = default;
  virtual const Point& base() const = 0;
  virtual DistanceBracket bracket(const Point& y) const = 0;
  // Largest radius the oracle was built for; beyond it upper = +inf.
  virtual double max_radius() const = 0;
  // Per-axis half-widths of a box around the base guaranteed to contain the
  // metric ball B(base, r), r <= max_radius(). Anisotropic for degenerate
  // frames (the reach along axis k in time r is at most r sup row_k(B)).
  virtual Point bounding_halfwidths(double r) const = 0;
};

// Exact oracle for constant orthonormal frames (CC metric = Euclidean).
class EuclideanPointOracle final : public PointDistanceOracle {
 public:
  explicit EuclideanPointOracle(Point base) : x_(std::move(base)) {}
  const Point& base() const override { return x_; }
  DistanceBracket bracket(const Point& y) const override {
    const double d = (y - x_).norm();
    return {d, d};
  }
  double max_radius() const override { return 1e300; }
  Point bounding_halfwidths(double r) const override {
    return Point::Constant(x_.size(), r);
  }

 private:
  Point x_;
};

struct ChordOracleOptions {
  int cells_per_radius = 20;  // lattice resolution relative to max radius
  int stencil_radius = 3;     // chord offsets up to this many cells per axis (n<=3)
  double rel_upper = 0.02;    // upper-side inflation of the graph distance
  double rel_lower = 0.03;    // lower-side deflation (stencil metrication)
};

// Shortest sub-unit chord paths on a local anisotropic lattice sized to the
// reach box of B(base, r_max). Edges between nearby cells carry the
// least-squares control chord of the midpoint frame; for the model systems
// (linear triangular coefficients) the midpoint rule integrates the flow
// exactly, so accepted edges are genuine sub-unit segments and Dijkstra
// returns honest upper path lengths. A residual orthogonal to the frame range
// is closed through a first-layer bracket loop at cost 4 sqrt(resid/|bracket|)
// when the commutators reach that direction; rel_lower widens when such
// closure edges exist, since loop costs overshoot the optimal maneuver.
class ChordGraphOracle final : public PointDistanceOracle {
 public:
  ChordGraphOracle(std::shared_ptr<const VectorFieldSystem> sys, Point base, double r_max,
                   const ChordOracleOptions& opts = {});

  const Point& base() const override { return x_; }
  DistanceBracket bracket(const Point& y) const override;
  double max_radius() const override { return r_max_; }
  Point bounding_halfwidths(double) const override { return halfwidths_; }
  const Lattice& lattice() const { return lat_; }
  double value_at(const Point& y) const;  // interpolated graph distance
  bool used_bracket_closure() const { return used_closure_; }

 private:
  double interpolate(const std::vector<double>& field, const Point& y) const;
  std::shared_ptr<const VectorFieldSystem> sys_;
  Point x_;
  Point halfwidths_;
  double r_max_ = 0.0, speed_bound_ = 1.0, quantum_ = 0.0;
  bool used_closure_ = false;
  ChordOracleOptions opts_;
  Lattice lat_;
  std::vector<double> dist_;
  std::vector<double> closure_;  // closure-cost share along the shortest path
};

// Chooses the exact Euclidean oracle when the frame allows it, otherwise the
// chord-graph oracle.
std::unique_ptr<PointDistanceOracle> make_point_oracle(
    std::shared_ptr<const VectorFieldSystem> sys, const Point& base, double r_max,
    const ChordOracleOptions& opts = {});

// Per-axis reach box of B(x,r): fixed-point iteration of
// W_k = 1.1 r * row_k norm bound over the current box. speed_out receives the
// overall operator-norm bound on the final box.
Point reach_halfwidths(const VectorFieldSystem& sys, const Point& x, double r,
                       double* speed_out = nullptr);

}  // namespace cch
