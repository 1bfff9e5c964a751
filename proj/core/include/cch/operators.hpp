#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "cch/distance.hpp"
#include "cch/grid.hpp"

namespace cch {

// m-component horizontal field stored interleaved per cell.
class HorizontalField {
 public:
  HorizontalField() = default;
  HorizontalField(std::shared_ptr<const GridDomain> dom, int m)
      : dom_(std::move(dom)), m_(m), v_(dom_->cells() * m, 0.0) {}

  int m() const { return m_; }
  const GridDomain& domain() const { return *dom_; }
  std::shared_ptr<const GridDomain> domain_ptr() const { return dom_; }
  double& at(std::size_t c, int i) { return v_[c * m_ + i]; }
  double at(std::size_t c, int i) const { return v_[c * m_ + i]; }
  double norm_sq(std::size_t c) const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) s += at(c, i) * at(c, i);
    return s;
  }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::shared_ptr<const GridDomain> dom_;
  int m_ = 0;
  std::vector<double> v_;
};

// X_i u = sum_k b_{ki} d_k u with central differences (one-sided at the
// lattice edge). Values are produced at every cell; consumers restrict to the
// inside mask.
HorizontalField x_gradient(const GridFunction& u);

// Formal adjoint: div_X v = sum_{i,k} d_k (b_{ki} v_i), central differences.
// Discrete integration by parts <Xu, v> + <u, div_X v> = O(h) ||u|| ||v|| for
// compactly supported u, v.
GridFunction x_divergence(const HorizontalField& v);

// sum over inside cells of w(c) |u(c)|^p h^n in fixed cell order; w may be
// null (unit weight). Throws NonFiniteWeight.
double integrate(const GridFunction& u, double p, const GridFunction* weight = nullptr);

// L^2-type inner products over inside cells (fixed order).
double inner(const GridFunction& a, const GridFunction& b);
double inner(const HorizontalField& a, const HorizontalField& b);

struct WeakNorm {
  double level_form = 0.0;  // sup_t t |{|u| > t}|^{1/s}
  double sup_form = 0.0;    // sup over superlevel sets E of |E|^{1/s-1/r} (int_E |u|^r)^{1/r}, r = s/2
};

// Weak L^s quasinorm over the inside cells; s = +inf gives the max norm in
// both fields.
WeakNorm weak_norm(const GridFunction& u, double s);

// Ball averages of |u| around one point for dyadic radii; distances come from
// the oracle bracket midpoint. Used by the truncated maximal operator and the
// pointwise Hardy scan.
class MetricBallAverager {
 public:
  MetricBallAverager(std::shared_ptr<const GridDomain> dom, const Point& center, double r_max);

  // average of |u| over B(center, r) intersected with the lattice cells
  // (inside + band); zero-extension outside the domain.
  double average(const GridFunction& u, double r) const;
  // max over dyadic radii rho in {R, R/2, ..., >= 2h} of the average
  double maximal(const GridFunction& u, double R) const;
  double distance_to(std::size_t cell) const { return d_[cell]; }

 private:
  std::shared_ptr<const GridDomain> dom_;
  std::vector<double> d_;  // bracket-midpoint distance from center to each cell
};

// M_R(|u|) at every cell. Cost grows with (R/h)^n per cell; intended for
// small grids and moderate R. For isolated evaluation points use
// MetricBallAverager directly.
GridFunction truncated_maximal(const GridFunction& u, double R);

}  // namespace cch
