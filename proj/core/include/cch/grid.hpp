#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cch/eikonal.hpp"
#include "cch/htype.hpp"
#include "cch/lattice.hpp"
#include "cch/nsw.hpp"

namespace cch {

// Geometric region used to classify lattice cells. Shapes stay queryable
// after discretization so that ambient-complement masks (fatness, thickness)
// can be rebuilt on other lattices.
class Shape {
 public:
  virtual ~Shape() = default;
  virtual bool contains(const Point& x) const = 0;
  virtual void bounding_box(Point& lo, Point& hi) const = 0;
  virtual std::string describe() const = 0;
};

std::shared_ptr<Shape> make_box(const Point& lo, const Point& hi);
std::shared_ptr<Shape> make_euclidean_ball(const Point& center, double radius);
// Kaplan gauge ball {y : N(x^{-1} y) < R} of an H-type group.
std::shared_ptr<Shape> make_gauge_ball(const HTypeGroup& group, const Point& center, double radius);
std::shared_ptr<Shape> make_difference(std::shared_ptr<Shape> a, std::shared_ptr<Shape> b);

enum class CellKind : std::uint8_t { Outside = 0, Inside = 1, Band = 2 };

struct DiscretizeOptions {
  int margin_cells = 2;     // outside collar beyond the shape box
  double r0 = -1.0;         // local parameter R_0; <0 = derive from the shape box
  bool compute_delta = true;
  // Oracle-metric balls can fragment at coarse resolution (bracket noise at
  // thin caps); internal callers keep the component of the largest cell count
  // instead of failing.
  bool keep_largest_component = false;
  EikonalOptions eikonal;
};

class GridFunction;

// Lattice discretization of a bounded domain: inside mask, one-cell boundary
// band where compactly supported functions vanish, CC distance-to-boundary
// field delta solved by Lax-Friedrichs sweeping.
class GridDomain {
 public:
  const Lattice& lattice() const { return lat_; }
  double h() const { return lat_.hs[0]; }  // grid-module lattices are uniform
  int n() const { return lat_.n(); }
  std::size_t cells() const { return lat_.size(); }
  CellKind kind(std::size_t c) const { return kind_[c]; }
  bool inside(std::size_t c) const { return kind_[c] == CellKind::Inside; }
  bool band(std::size_t c) const { return kind_[c] == CellKind::Band; }
  const std::vector<std::size_t>& inside_cells() const { return inside_cells_; }
  const std::vector<std::size_t>& band_cells() const { return band_cells_; }
  double delta(std::size_t c) const { return delta_[c]; }
  const std::vector<double>& delta_field() const { return delta_; }
  const EikonalStats& delta_stats() const { return delta_stats_; }
  const Shape& shape() const { return *shape_; }
  std::shared_ptr<const Shape> shape_ptr() const { return shape_; }
  const LocalParameters& params() const { return params_; }
  void set_params(const LocalParameters& p) { params_ = p; }
  const VectorFieldSystem& system() const { return *sys_; }
  const FrameCache& frames() const { return *frames_; }

  double inside_volume() const { return static_cast<double>(inside_cells_.size()) * lat_.cell_volume(); }

  friend std::shared_ptr<GridDomain> discretize(std::shared_ptr<Shape> shape, double h,
                                                std::shared_ptr<const VectorFieldSystem> sys,
                                                const DiscretizeOptions& opts);

 private:
  Lattice lat_;
  std::vector<CellKind> kind_;
  std::vector<std::size_t> inside_cells_, band_cells_;
  std::vector<double> delta_;
  EikonalStats delta_stats_;
  std::shared_ptr<const Shape> shape_;
  std::shared_ptr<const VectorFieldSystem> sys_;
  std::shared_ptr<const FrameCache> frames_;
  LocalParameters params_;
};

// Masks populated, delta computed, connectedness verified (flood fill over
// face-adjacent inside cells). Throws EmptyDomain / DisconnectedDomain.
std::shared_ptr<GridDomain> discretize(std::shared_ptr<Shape> shape, double h,
                                       std::shared_ptr<const VectorFieldSystem> sys,
                                       const DiscretizeOptions& opts = {});

// Scalar field on a GridDomain with implicit zero extension outside the
// inside mask. Values are stored for every lattice cell.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(std::shared_ptr<const GridDomain> dom)
      : dom_(std::move(dom)), v_(dom_->cells(), 0.0) {}

  const GridDomain& domain() const { return *dom_; }
  std::shared_ptr<const GridDomain> domain_ptr() const { return dom_; }
  double& operator[](std::size_t c) { return v_[c]; }
  double operator[](std::size_t c) const { return v_[c]; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  // zero on the band and outside; enforced, not checked
  void zero_boundary();
  bool compactly_supported(double tol = 0.0) const;
  double max_abs() const;

 private:
  std::shared_ptr<const GridDomain> dom_;
  std::vector<double> v_;
};

}  // namespace cch
