#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "cch/distance.hpp"
#include "cch/operators.hpp"

namespace cch {

// Condenser (K, Omega): K is a set of inside cells of the reference domain.
struct Condenser {
  std::vector<std::size_t> plate_cells;  // K
};

struct CapacityOptions {
  // epsilon-continuation stages in units of the characteristic gradient
  // scale; |Xu|^p is non-smooth at 0 for p < 2 and badly conditioned for
  // p > 2.
  std::vector<double> eps_stages = {1e-1, 1e-2, 1e-3, 1e-4};
  int max_iterations_per_stage = 900;
  // stop a stage when the relative energy decrement over this many
  // iterations falls below decrement_tol
  int decrement_window = 50;
  double decrement_tol = 1e-6;
  bool throw_on_budget = true;
};

struct CapacityResult {
  double value = 0.0;  // final energy at eps = 0: the capacity upper estimate
  GridFunction minimizer;
  int iterations = 0;
  double final_decrement = 0.0;
  double eps_at_exit = 0.0;
};

// Minimizes sum (|Xu|^2 + eps^2)^{p/2} h^n over grid functions with u = 1 on
// K and u = 0 on the boundary band, by projected nonlinear conjugate
// gradient (Polak-Ribiere+, Armijo backtracking, [0,1] clamp) with the
// epsilon-continuation schedule, warm-starting each stage.
CapacityResult p_capacity(std::shared_ptr<const GridDomain> domain, const Condenser& condenser,
                          double p, const CapacityOptions& opts = {});

// Shape whose membership is a metric ball of a point-distance oracle.
std::shared_ptr<Shape> make_oracle_ball(std::shared_ptr<const PointDistanceOracle> oracle,
                                        double radius);

struct AnnulusCheck {
  std::vector<double> radii;
  std::vector<double> ratios;  // cap_p(B-bar(x,r), B(x,2r)) / (|B(x,r)| r^-p)
  bool stable_within_factor4 = false;
};

struct AnnulusOptions {
  int cells_per_radius = 16;  // grid resolution: h = r / cells_per_radius
  int dyadic_levels = 3;      // r, r/2, r/4
  CapacityOptions capacity;
};

// Two-sided annular capacity ratio at dyadic radii.
AnnulusCheck annulus_check(std::shared_ptr<const VectorFieldSystem> sys, const Point& x, double r,
                           double p, const AnnulusOptions& opts = {});

struct FatnessRow {
  Point w;
  double r = 0.0;
  double cap_complement = 0.0;  // cap_p((R^n \ Omega) cap B-bar(w,r), B(w,2r))
  double cap_ball = 0.0;        // cap_p(B-bar(w,r), B(w,2r))
  double ratio = 0.0;
};

struct FatnessCertificate {
  double c0 = 0.0;  // min of the ratio table
  double r0 = 0.0;
  double p = 0.0;
  std::vector<FatnessRow> rows;
};

struct FatnessOptions {
  int boundary_samples = 24;  // farthest-point sampling of the boundary band
  std::vector<double> radii;  // empty = {r0/4, r0/8, r0/16}
  int cells_per_radius = 12;
  CapacityOptions capacity;
};

// Uniform (X,p)-fatness scan of the complement of the domain.
FatnessCertificate fatness_scan(const GridDomain& domain,
                                std::shared_ptr<const VectorFieldSystem> sys, double p,
                                const FatnessOptions& opts = {});

// Runs fatness_scan at each q <= p; reports per-q certificates and the
// smallest listed q whose certificate stays positive.
struct SelfImprovement {
  std::vector<std::pair<double, FatnessCertificate>> table;
  std::optional<double> smallest_fat_q;
};
SelfImprovement self_improvement(const GridDomain& domain,
                                 std::shared_ptr<const VectorFieldSystem> sys, double p,
                                 const std::vector<double>& q_list,
                                 const FatnessOptions& opts = {});

// Atoms with nonnegative weights.
struct DiscreteMeasure {
  std::vector<Point> atoms;
  std::vector<double> weights;
  double total_mass() const;
};

struct WolffOptions {
  int nodes_per_decade = 128;
  double t_min = 0.0;  // quadrature lower cutoff; 0 = R * 1e-4
};

// W_p^R mu(x) = int_0^R [mu(B(x,t)) / (t^-p |B(x,t)|)]^{1/(p-1)} dt/t by
// log-space midpoint quadrature; |B(x,t)| comes from the volume callback.
double wolff_potential(const DiscreteMeasure& mu, const PointDistanceOracle& dist, double R,
                       double p, const std::function<double(double)>& ball_volume_of,
                       const WolffOptions& opts = {});

// Farthest-point subsample of the boundary band cell centers; deterministic.
std::vector<Point> sample_boundary_points(const GridDomain& domain, int count);

}  // namespace cch
