#pragma once

#include <vector>

#include <Eigen/Core>

#include "cch/polynomial.hpp"

namespace cch {

class VectorFieldSystem;

// Carnot group of Heisenberg type. Coordinates g = (x, y) with x in R^{2k}
// (first layer) and y in R^q (center); homogeneous dimension Q = 2k + 2q.
// Group law: (x,y)*(x',y') = (x+x', y+y'+ (1/2) <J_s x, x'>_s) built from
// anticommuting orthogonal complex structures J_s. With this convention the
// Kaplan gauge N(g) = (|x|^4 + 16 |y|^2)^{1/4} satisfies |XN| = |x|/N, the
// normalization the explicit fundamental solutions rely on. The commutator
// scale [X_i, X_j] = sum_s (J_s)_{ji} d/dy_s is stored, not assumed; the test
// suite verifies the point-mass identity of the fundamental solution against
// it.
class HTypeGroup {
 public:
  // q = 1 works for any k (symplectic J); q = 2 or 3 require 2k divisible by
  // 4 (quaternionic J). Larger q is rejected.
  HTypeGroup(int k, int q);

  int k() const { return k_; }
  int q() const { return q_; }
  int horiz_dim() const { return 2 * k_; }
  int center_dim() const { return q_; }
  int dim() const { return 2 * k_ + q_; }
  int homogeneous_dim() const { return 2 * k_ + 2 * q_; }

  const Eigen::MatrixXd& J(int s) const { return J_.at(s); }

  Point product(const Point& a, const Point& b) const;
  Point inverse(const Point& a) const;
  Point dilate(double lambda, const Point& a) const;
  Point identity() const;

  // Kaplan gauge N(a); zero exactly at the identity.
  double kaplan_gauge(const Point& a) const;
  // |XN(a)|^2 from the left-invariant frame; throws Singularity at the
  // identity where N is not differentiable.
  double gauge_hgrad_sq(const Point& a) const;
  // The horizontal gradient XN(a) itself (m-vector of frame derivatives).
  Eigen::VectorXd gauge_hgrad(const Point& a) const;

  // Left-invariant first-layer frame as a polynomial vector-field system.
  VectorFieldSystem frame() const;

 private:
  int k_ = 0, q_ = 0;
  std::vector<Eigen::MatrixXd> J_;
};

}  // namespace cch
