#include "cch/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cch/errors.hpp"

namespace cch {

namespace {

class BoxShape final : public Shape {
 public:
  BoxShape(Point lo, Point hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}
  bool contains(const Point& x) const override {
    for (int k = 0; k < x.size(); ++k)
      if (x[k] <= lo_[k] || x[k] >= hi_[k]) return false;
    return true;
  }
  void bounding_box(Point& lo, Point& hi) const override {
    lo = lo_;
    hi = hi_;
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "box[" << lo_.transpose() << " ; " << hi_.transpose() << "]";
    return os.str();
  }

 private:
  Point lo_, hi_;
};

class BallShape final : public Shape {
 public:
  BallShape(Point c, double r) : c_(std::move(c)), r_(r) {}
  bool contains(const Point& x) const override { return (x - c_).norm() < r_; }
  void bounding_box(Point& lo, Point& hi) const override {
    lo = c_.array() - r_;
    hi = c_.array() + r_;
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "ball(c=" << c_.transpose() << ", r=" << r_ << ")";
    return os.str();
  }

 private:
  Point c_;
  double r_;
};

class GaugeBallShape final : public Shape {
 public:
  GaugeBallShape(HTypeGroup g, Point c, double r) : g_(std::move(g)), c_(std::move(c)), r_(r) {}
  bool contains(const Point& x) const override {
    return g_.kaplan_gauge(g_.product(g_.inverse(c_), x)) < r_;
  }
  void bounding_box(Point& lo, Point& hi) const override {
    // N < R forces |x| < R and |y_s| < R^2/4
    const int d = g_.horiz_dim();
    lo = c_;
    hi = c_;
    for (int k = 0; k < g_.dim(); ++k) {
      const double w = k < d ? r_ : r_ * r_ / 4.0;
      lo[k] -= w;
      hi[k] += w;
    }
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "gauge-ball(k=" << g_.k() << ",q=" << g_.q() << ", r=" << r_ << ")";
    return os.str();
  }

 private:
  HTypeGroup g_;
  Point c_;
  double r_;
};

class DifferenceShape final : public Shape {
 public:
  DifferenceShape(std::shared_ptr<Shape> a, std::shared_ptr<Shape> b)
      : a_(std::move(a)), b_(std::move(b)) {}
  bool contains(const Point& x) const override { return a_->contains(x) && !b_->contains(x); }
  void bounding_box(Point& lo, Point& hi) const override { a_->bounding_box(lo, hi); }
  std::string describe() const override {
    return a_->describe() + " minus " + b_->describe();
  }

 private:
  std::shared_ptr<Shape> a_, b_;
};

}  // namespace

std::shared_ptr<Shape> make_box(const Point& lo, const Point& hi) {
  return std::make_shared<BoxShape>(lo, hi);
}
std::shared_ptr<Shape> make_euclidean_ball(const Point& center, double radius) {
  return std::make_shared<BallShape>(center, radius);
}
std::shared_ptr<Shape> make_gauge_ball(const HTypeGroup& group, const Point& center,
                                       double radius) {
  return std::make_shared<GaugeBallShape>(group, center, radius);
}
std::shared_ptr<Shape> make_difference(std::shared_ptr<Shape> a, std::shared_ptr<Shape> b) {
  return std::make_shared<DifferenceShape>(std::move(a), std::move(b));
}

std::shared_ptr<GridDomain> discretize(std::shared_ptr<Shape> shape, double h,
                                       std::shared_ptr<const VectorFieldSystem> sys,
                                       const DiscretizeOptions& opts) {
  if (h <= 0.0) throw ConfigError("discretize: spacing h must be positive");
  if (!shape) throw ConfigError("discretize: null shape");
  auto dom_ptr = std::make_shared<GridDomain>();
  GridDomain& dom = *dom_ptr;
  Point lo, hi;
  shape->bounding_box(lo, hi);
  const int n = static_cast<int>(lo.size());
  if (sys->ambient_dim() != n) throw ConfigError("discretize: system/shape dimension mismatch");
  const double margin = opts.margin_cells * h;
  Point mlo = lo.array() - margin, mhi = hi.array() + margin;
  dom.lat_ = Lattice::covering(mlo, mhi, h);
  const std::size_t cells = dom.lat_.size();
  dom.kind_.assign(cells, CellKind::Outside);

  std::vector<int> idx(n);
  for (std::size_t c = 0; c < cells; ++c) {
    if (shape->contains(dom.lat_.center(c))) dom.kind_[c] = CellKind::Inside;
  }
  // band: non-inside cells touching an inside cell (Chebyshev radius 1)
  std::vector<int> nb(n);
  for (std::size_t c = 0; c < cells; ++c) {
    if (dom.kind_[c] != CellKind::Outside) continue;
    dom.lat_.unindex(c, idx);
    bool touches = false;
    const long count = static_cast<long>(std::pow(3.0, n));
    for (long s = 0; s < count && !touches; ++s) {
      long rem = s;
      bool self = true;
      for (int k = 0; k < n; ++k) {
        const int off = static_cast<int>(rem % 3) - 1;
        rem /= 3;
        nb[k] = idx[k] + off;
        if (off != 0) self = false;
      }
      if (self || !dom.lat_.in_bounds(nb)) continue;
      if (dom.kind_[dom.lat_.index(nb)] == CellKind::Inside) touches = true;
    }
    if (touches) dom.kind_[c] = CellKind::Band;
  }

  for (std::size_t c = 0; c < cells; ++c) {
    if (dom.kind_[c] == CellKind::Inside) dom.inside_cells_.push_back(c);
    else if (dom.kind_[c] == CellKind::Band) dom.band_cells_.push_back(c);
  }
  if (dom.inside_cells_.empty()) throw EmptyDomain("discretize: no inside cells at h=" + std::to_string(h));

  // connectedness: flood fill over face neighbors
  {
    std::vector<std::uint8_t> seen(cells, 0);
    std::vector<std::size_t> stack{dom.inside_cells_.front()};
    seen[stack.front()] = 1;
    std::size_t reached = 0;
    std::vector<int> jdx(n);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      ++reached;
      dom.lat_.unindex(c, jdx);
      for (int k = 0; k < n; ++k)
        for (int s = -1; s <= 1; s += 2) {
          jdx[k] += s;
          if (dom.lat_.in_bounds(jdx)) {
            const std::size_t cn = dom.lat_.index(jdx);
            if (!seen[cn] && dom.kind_[cn] == CellKind::Inside) {
              seen[cn] = 1;
              stack.push_back(cn);
            }
          }
          jdx[k] -= s;
        }
    }
    if (reached != dom.inside_cells_.size()) {
      std::ostringstream os;
      os << "discretize: inside region is disconnected (" << reached << " of "
         << dom.inside_cells_.size() << " cells reachable)";
      throw DisconnectedDomain(os.str());
    }
  }

  dom.shape_ = shape;
  dom.sys_ = sys;
  dom.frames_ = std::make_shared<FrameCache>(dom.lat_, *sys);

  if (opts.r0 > 0.0) dom.params_.r0 = opts.r0;
  else {
    double ext = hi[0] - lo[0];
    for (int k = 1; k < n; ++k) ext = std::min(ext, hi[k] - lo[k]);
    dom.params_.r0 = 0.25 * ext;
  }

  dom.delta_.assign(cells, 0.0);
  if (opts.compute_delta) {
    std::vector<EikCell> mode(cells, EikCell::Excluded);
    for (std::size_t c : dom.inside_cells_) mode[c] = EikCell::Active;
    for (std::size_t c : dom.band_cells_) mode[c] = EikCell::Source;
    if (dom.band_cells_.empty())
      throw EmptyDomain("discretize: domain has no boundary band");
    dom.delta_stats_ = solve_eikonal(dom.lat_, *dom.frames_, mode, dom.delta_, opts.eikonal);
  }
  return dom_ptr;
}

void GridFunction::zero_boundary() {
  for (std::size_t c = 0; c < v_.size(); ++c)
    if (!dom_->inside(c)) v_[c] = 0.0;
}

bool GridFunction::compactly_supported(double tol) const {
  for (std::size_t c = 0; c < v_.size(); ++c)
    if (!dom_->inside(c) && std::abs(v_[c]) > tol) return false;
  return true;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace cch
