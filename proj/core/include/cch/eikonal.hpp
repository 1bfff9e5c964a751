#pragma once

#include <cstdint>
#include <vector>

#include "cch/lattice.hpp"

namespace cch {

// Cell roles for the sweeping solver.
enum class EikCell : std::uint8_t {
  Excluded = 0,  // treated as +inf, never updated
  Active = 1,    // updated by sweeps
  Source = 2,    // fixed boundary value (usually 0)
};

struct EikonalOptions {
  // Convergence is on the sweeping fixed point: max update per full round of
  // 2^n sweeps, measured in units of h. The per-cell gradient residual
  // max | |X delta| - 1 | cannot tend to zero at ridges of the distance
  // function, so it is reported, not iterated on.
  double tol = 1e-3;
  int max_rounds = 600;
  bool throw_on_nonconvergence = true;
  // Convergence is judged on cells at or below this value; cells beyond keep
  // relaxing but only mean "farther than the cap". Point oracles set it to a
  // little past their query radius, which sidesteps the very slow plateau
  // drain inside degenerate strips far outside the ball of interest.
  double value_cap = 1e300;
  int settle_rounds = 6;  // consecutive quiet rounds required under a cap
};

struct EikonalStats {
  double fixed_point_residual = 0.0;  // max |delta_new - delta_old| / h, last round
  int rounds = 0;
  bool converged = false;
  double grad_residual_max = 0.0;     // max over active cells of ||X delta| - 1|
  double grad_residual_median = 0.0;  // median of the same
};

// First-order Lax-Friedrichs sweeping for |B(x)^T grad(delta)| = 1 with
// per-axis viscosity sigma_k = max over the lattice of the frame row norm.
// `dist` carries initial values for Source cells (others are overwritten);
// 2^n sweep orderings per round. Deterministic, single-threaded.
EikonalStats solve_eikonal(const Lattice& lat, const FrameCache& frames,
                           const std::vector<EikCell>& mode, std::vector<double>& dist,
                           const EikonalOptions& opts = {});

}  // namespace cch
