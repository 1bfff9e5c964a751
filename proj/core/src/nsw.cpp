#include "cch/nsw.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Dense>

#include "cch/errors.hpp"

namespace cch {

double NswProfile::lambda(double r) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.coeff * std::pow(r, t.exponent);
  return acc;
}

double NswProfile::lambda_derivative(double r) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.coeff * t.exponent * std::pow(r, t.exponent - 1);
  return acc;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// |det| and degree sum for every n-combination of basis fields at x.
struct CombinationScan {
  std::map<int, double> groups;  // exponent -> sum over combinations of n!|det|
  double max_abs_det = 0.0;
  std::map<int, double> max_det_by_exp;  // exponent -> largest single |det|
};

CombinationScan scan_combinations(const CommutatorBasis& basis, const Point& x) {
  const int n = basis.ambient_dim();
  const int l = basis.size();
  const Eigen::MatrixXd Y = basis.eval(x);
  CombinationScan out;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (l < n) return out;
  const double nfact = factorial(n);
  Eigen::MatrixXd sub(n, n);
  for (;;) {
    for (int c = 0; c < n; ++c) sub.col(c) = Y.col(idx[c]);
    const double det = std::abs(sub.determinant());
    if (det > 0.0) {
      int d = 0;
      for (int c = 0; c < n; ++c) d += basis.degree(idx[c]);
      out.groups[d] += nfact * det;
      out.max_abs_det = std::max(out.max_abs_det, det);
      auto it = out.max_det_by_exp.find(d);
      if (it == out.max_det_by_exp.end()) out.max_det_by_exp[d] = det;
      else it->second = std::max(it->second, det);
    }
    // next combination
    int k = n - 1;
    while (k >= 0 && idx[k] == l - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Exhaustive ordered-tuple enumeration; only used when l^n is small. Kept as
// the reference path: repeated-index tuples contribute zero determinants.
CombinationScan scan_exhaustive(const CommutatorBasis& basis, const Point& x) {
  const int n = basis.ambient_dim();
  const int l = basis.size();
  const Eigen::MatrixXd Y = basis.eval(x);
  CombinationScan out;
  std::vector<int> t(n, 0);
  Eigen::MatrixXd sub(n, n);
  for (;;) {
    for (int c = 0; c < n; ++c) sub.col(c) = Y.col(t[c]);
    const double det = std::abs(sub.determinant());
    if (det > 0.0) {
      int d = 0;
      for (int c = 0; c < n; ++c) d += basis.degree(t[c]);
      out.groups[d] += det;
      out.max_abs_det = std::max(out.max_abs_det, det);
      auto it = out.max_det_by_exp.find(d);
      if (it == out.max_det_by_exp.end()) out.max_det_by_exp[d] = det;
      else it->second = std::max(it->second, det);
    }
    int k = n - 1;
    while (k >= 0 && t[k] == l - 1) {
      t[k] = 0;
      --k;
    }
    if (k < 0) break;
    ++t[k];
  }
  return out;
}

NswProfile profile_from_scan(const CombinationScan& scan, const Point& x) {
  if (scan.groups.empty())
    throw DegenerateBasis("nsw_profile: every frame determinant vanishes at the base point");
  const double thr = 1e-9 * scan.max_abs_det;
  std::vector<NswProfile::TermGroup> terms;
  for (const auto& [d, coeff] : scan.groups) {
    if (scan.max_det_by_exp.at(d) <= thr) continue;  // below the degeneracy cut
    terms.push_back({coeff, d});
  }
  if (terms.empty())
    throw DegenerateBasis("nsw_profile: all determinants below the degeneracy threshold");
  return NswProfile(x, std::move(terms));
}

}  // namespace

NswProfile::NswProfile(Point x, std::vector<TermGroup> terms)
    : x_(std::move(x)), terms_(std::move(terms)) {
  if (terms_.empty()) throw DegenerateBasis("NswProfile: no terms");
  q_at_x_ = terms_.front().exponent;
  q_max_ = terms_.front().exponent;
  for (const auto& t : terms_) {
    q_at_x_ = std::min(q_at_x_, t.exponent);
    q_max_ = std::max(q_max_, t.exponent);
  }
  q_local_ = q_max_;
}

NswProfile nsw_profile(const CommutatorBasis& basis, const Point& x) {
  const int n = basis.ambient_dim();
  const int l = basis.size();
  const double tuples = std::pow(static_cast<double>(l), n);
  CombinationScan scan =
      tuples <= 1e6 ? scan_exhaustive(basis, x) : scan_combinations(basis, x);
  return profile_from_scan(scan, x);
}

std::pair<int, int> homogeneous_dimensions(const CommutatorBasis& basis, const Point& x,
                                           const std::vector<Point>& compact_samples) {
  NswProfile at_x = nsw_profile(basis, x);
  int q_local = at_x.max_exponent();
  for (const auto& s : compact_samples) {
    NswProfile p = nsw_profile(basis, s);
    q_local = std::max(q_local, p.max_exponent());
  }
  return {at_x.q_at_x(), q_local};
}

void check_rescaling_bracket(const NswProfile& prof, const std::vector<double>& radii,
                             const std::vector<double>& ts, int q_local) {
  const int qx = prof.q_at_x();
  for (double r : radii)
    for (double t : ts) {
      if (t < 0.0 || t > 1.0) throw ConfigError("check_rescaling_bracket: t must be in [0,1]");
      const double lam = prof.lambda(r);
      const double lam_t = prof.lambda(t * r);
      const double lower = std::pow(t, q_local) * lam;
      const double upper = std::pow(t, qx) * lam;
      const double slack = 1e-9 * std::max({std::abs(lower), std::abs(upper), lam_t});
      if (lam_t < lower - slack || lam_t > upper + slack) {
        std::ostringstream os;
        os << "rescaling bracket violated at r=" << r << " t=" << t << ": " << lower
           << " <= " << lam_t << " <= " << upper;
        throw ComparabilityViolation(os.str());
      }
    }
}

}  // namespace cch
