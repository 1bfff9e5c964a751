#pragma once

#include <vector>

#include "cch/vector_field.hpp"

namespace cch {

// Piecewise-constant sub-unit control path: |u(t)| <= 1, each control applied
// for `timestep`, so the sub-unit length is timestep * controls.size().
struct SubUnitPath {
  Point start;
  double timestep = 0.0;
  std::vector<Eigen::VectorXd> controls;  // m-vectors, |u| <= 1

  double length() const { return timestep * static_cast<double>(controls.size()); }
  // Integrates xdot = B(x) u; returns the visited points (size steps+1).
  std::vector<Point> trajectory(const VectorFieldSystem& sys) const;
};

struct CcDistanceOptions {
  int steps = 48;            // control discretization
  int max_iterations = 400;  // per penalty stage
  int restarts = 3;          // extra random initializations
  double reach_tol = 1e-4;   // terminal miss tolerance, relative to |x-y|
  std::uint64_t seed = 17;
};

struct CcDistanceResult {
  double upper = 0.0;  // sub-unit length of the optimized witness
  double lower = 0.0;  // |x-y| / max segment frame norm
  SubUnitPath witness;
  double terminal_miss = 0.0;
};

// Shooting with control refinement: adjoint-gradient descent on
// sum |u_s| + mu ||x(T)-y||^2 with a penalty continuation, multi-start.
// The upper bound is the measured length of an actual discrete path; the
// lower bound is analytic up to segment sampling. Throws NoPathFound when the
// optimizer fails to connect within the budget (a budget signal, not a
// non-connectivity certificate).
CcDistanceResult cc_distance(const VectorFieldSystem& sys, const Point& x, const Point& y,
                             const CcDistanceOptions& opts = {});

}  // namespace cch
