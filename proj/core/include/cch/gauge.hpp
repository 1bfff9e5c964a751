#pragma once

#include <cstdint>
#include <memory>

#include "cch/htype.hpp"
#include "cch/nsw.hpp"

namespace cch {

struct OmegaSigma {
  double omega_p = 0.0;  // int_{N<1} |XN|^p
  double sigma_p = 0.0;  // Q omega_p
  double mc_halfwidth = 0.0;
  std::size_t samples = 0;
};

// Monte-Carlo estimate of omega_p over the unit gauge ball; deterministic per
// seed and chunk-invariant.
OmegaSigma omega_sigma(const HTypeGroup& group, double p, std::size_t n_samples = 1000000,
                       std::uint64_t seed = 0xC0FFEE);

// Process-wide cache: sigma_p enters the fundamental solution as a constant
// and must be consistent across modules; computed once per (k, q, p) with the
// default sample budget and seed.
const OmegaSigma& cached_omega_sigma(const HTypeGroup& group, double p);

// Explicit fundamental solution of -L_p on an H-type group:
//   Gamma_p(g) = (p-1)/(Q-p) sigma_p^{-1/(p-1)} N(g)^{-(Q-p)/(p-1)},  p != Q
//   Gamma_Q(g) = sigma_Q^{-1/(Q-1)} log N(g)
// Throws Singularity at the identity.
double fundamental_solution(const HTypeGroup& group, double p, const Point& g);

// |X Gamma_p|(g) from the closed form (chain rule through the gauge).
double fundamental_solution_hgrad_norm(const HTypeGroup& group, double p, const Point& g);

// E(x,r) = (Lambda(x,r)/r^p)^{1/(p-1)} and its inverse F. For Carnot groups
// the profile is the exact monomial omega r^{(Q-p)/(p-1)}; general profiles
// come from an NswProfile. F is inverted by bisection (E is strictly
// increasing for p < Q(x)).
class GaugeProfile {
 public:
  // monomial profile of a group: Lambda(x,r) = lambda_coeff r^Q
  GaugeProfile(double lambda_coeff, int Q, double p);
  // general profile from the NSW polynomial at x
  GaugeProfile(const NswProfile& profile, double p, double r0);

  double p() const { return p_; }
  bool is_monomial() const { return monomial_; }
  double E(double r) const;
  double dE_over_E(double r) const;  // E'(r)/E(r)
  // inverse: F(E(r)) = r, bisection to 1e-12 relative on [1e-8, 10 r0]
  double F(double s) const;

 private:
  bool monomial_ = false;
  double coeff_ = 0.0;  // monomial: omega; else unused
  double expo_ = 0.0;   // monomial: (Q-p)/(p-1)
  NswProfile prof_;
  double p_ = 2.0;
  double r_lo_ = 1e-8, r_hi_ = 10.0;
};

// The regularized pseudo-distance rho_x(y) = F(x, 1/Gamma_p(x, y)) on an
// H-type group, where Gamma_p(x, y) = Gamma_p(x^{-1} y). Also reports the
// (exact, by homogeneity) proportionality constant rho_x(y) / N(x^{-1} y).
struct RhoGauge {
  double rho = 0.0;
  double gauge_ratio = 0.0;  // rho / N(x^{-1} y)
};
RhoGauge rho_gauge(const HTypeGroup& group, double p, const Point& x, const Point& y);

// NSW-profile coefficient of an H-type group's monomial Lambda(x,r) = c r^Q,
// computed from the frame's commutator basis once.
double group_lambda_coefficient(const HTypeGroup& group);

}  // namespace cch
