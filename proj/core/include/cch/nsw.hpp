#pragma once

#include <vector>

#include "cch/commutator.hpp"

namespace cch {

// Local parameters (C_0, R_0) of a compact set: doubling constant and radius
// scale below which closed metric balls are compact. R_0 is configuration
// with per-system defaults; no attempt is made to compute the maximal
// admissible value.
struct LocalParameters {
  double c0 = 1.0;
  double r0 = 0.5;
};

// Lambda(x,r) = sum_I |a_I(x)| r^{d(I)} aggregated by the exponent d(I).
// Determinants below 1e-9 times the largest |a_I(x)| at the same base point
// are treated as vanishing (scale-free cut), so every retained exponent lies
// in [Q(x), max exponent] and the rescaling bracket is exact.
class NswProfile {
 public:
  struct TermGroup {
    double coeff = 0.0;  // sum of n! |a_I| over combinations with this d(I)
    int exponent = 0;    // d(I)
  };

  NswProfile() = default;
  // terms must be sorted by exponent with positive coefficients
  NswProfile(Point x, std::vector<TermGroup> terms);

  const std::vector<TermGroup>& terms() const { return terms_; }
  const Point& base_point() const { return x_; }
  int q_at_x() const { return q_at_x_; }       // smallest live exponent Q(x)
  int max_exponent() const { return q_max_; }  // largest live exponent at x
  // Q over the reference compact set; equals max_exponent() unless widened
  // via set_q_local after scanning extra samples.
  int q_local() const { return q_local_; }
  void set_q_local(int q) { q_local_ = q; }

  double lambda(double r) const;          // Lambda(x,r)
  double lambda_derivative(double r) const;  // d/dr Lambda(x,r)

 private:
  Point x_;
  std::vector<TermGroup> terms_;  // sorted by exponent
  int q_at_x_ = 0, q_max_ = 0, q_local_ = 0;
};

// Exhaustive over ordered n-tuples when l^n <= 10^6, otherwise the
// permutation-class shortcut (tuples with a repeated field have zero
// determinant; each combination of n distinct fields contributes n! times
// |det|). Both paths produce identical term groups.
NswProfile nsw_profile(const CommutatorBasis& basis, const Point& x);

// (Q(x), Q) with Q(x) = inf live exponent at x, Q = sup over the samples of
// the largest live exponent.
std::pair<int, int> homogeneous_dimensions(const CommutatorBasis& basis, const Point& x,
                                           const std::vector<Point>& compact_samples);

// Verifies t^Q Lambda(x,r) <= Lambda(x,tr) <= t^{Q(x)} Lambda(x,r) on a
// (r,t) grid; exact for polynomials, so any failure beyond 1e-9 relative
// slack is a bug and throws ComparabilityViolation.
void check_rescaling_bracket(const NswProfile& prof, const std::vector<double>& radii,
                             const std::vector<double>& ts, int q_local);

}  // namespace cch
