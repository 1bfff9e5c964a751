#include "cch/gauge.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "cch/commutator.hpp"
#include "cch/errors.hpp"
#include "cch/parallel.hpp"
#include "cch/rng.hpp"

namespace cch {

OmegaSigma omega_sigma(const HTypeGroup& group, double p, std::size_t n_samples,
                       std::uint64_t seed) {
  if (p <= 1.0) throw ConfigError("omega_sigma: need p > 1");
  const int d = group.horiz_dim(), q = group.center_dim();
  const int n = d + q;
  // N < 1 forces |x| < 1 and |y_s| < 1/4
  double box_vol = 1.0;
  for (int k = 0; k < n; ++k) box_vol *= 2.0 * (k < d ? 1.0 : 0.25);

  constexpr std::size_t kChunk = 65536;
  const std::size_t nchunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0), partial_sq(nchunks, 0.0);
  parallel_for_blocks(n_samples, kChunk, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    Rng rng = Rng::for_chunk(seed, b);
    Point g(n);
    double acc = 0.0, acc2 = 0.0;
    for (std::size_t s = lo; s < hi; ++s) {
      for (int k = 0; k < n; ++k) g[k] = (k < d ? 1.0 : 0.25) * (2.0 * rng.next_double() - 1.0);
      if (group.kaplan_gauge(g) >= 1.0) continue;
      const double v = std::pow(group.gauge_hgrad_sq(g), 0.5 * p);
      acc += v;
      acc2 += v * v;
    }
    partial[b] = acc;
    partial_sq[b] = acc2;
  });
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t b = 0; b < nchunks; ++b) {
    sum += partial[b];
    sum_sq += partial_sq[b];
  }
  OmegaSigma out;
  out.samples = n_samples;
  const double N = static_cast<double>(n_samples);
  out.omega_p = box_vol * sum / N;
  const double mean = sum / N;
  const double var = std::max(0.0, sum_sq / N - mean * mean);
  out.mc_halfwidth = 1.96 * box_vol * std::sqrt(var / N);
  out.sigma_p = group.homogeneous_dim() * out.omega_p;
  return out;
}

const OmegaSigma& cached_omega_sigma(const HTypeGroup& group, double p) {
  static std::map<std::tuple<int, int, double>, OmegaSigma> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(group.k(), group.q(), p);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, omega_sigma(group, p)).first;
  return it->second;
}

double fundamental_solution(const HTypeGroup& group, double p, const Point& g) {
  if (p <= 1.0) throw ConfigError("fundamental_solution: need p > 1");
  const double N = group.kaplan_gauge(g);
  if (N == 0.0) throw Singularity("fundamental_solution: singular at the group identity");
  const double Q = group.homogeneous_dim();
  const double sigma = cached_omega_sigma(group, p).sigma_p;
  if (p == Q) return std::pow(sigma, -1.0 / (Q - 1.0)) * std::log(N);
  return (p - 1.0) / (Q - p) * std::pow(sigma, -1.0 / (p - 1.0)) *
         std::pow(N, -(Q - p) / (p - 1.0));
}

double fundamental_solution_hgrad_norm(const HTypeGroup& group, double p, const Point& g) {
  const double N = group.kaplan_gauge(g);
  if (N == 0.0) throw Singularity("fundamental_solution_hgrad_norm: singular at the identity");
  const double Q = group.homogeneous_dim();
  const double sigma = cached_omega_sigma(group, p).sigma_p;
  const double XN = std::sqrt(group.gauge_hgrad_sq(g));
  if (p == Q) return std::pow(sigma, -1.0 / (Q - 1.0)) * XN / N;
  // |Gamma'(N)| |XN| with Gamma = c N^{-(Q-p)/(p-1)}
  const double c = (p - 1.0) / (Q - p) * std::pow(sigma, -1.0 / (p - 1.0));
  const double a = (Q - p) / (p - 1.0);
  return std::abs(c) * a * std::pow(N, -a - 1.0) * XN;
}

GaugeProfile::GaugeProfile(double lambda_coeff, int Q, double p) : p_(p) {
  if (p <= 1.0 || p >= Q) throw ExponentViolation("GaugeProfile: need 1 < p < Q");
  monomial_ = true;
  expo_ = (Q - p) / (p - 1.0);
  coeff_ = std::pow(lambda_coeff, 1.0 / (p - 1.0));
}

GaugeProfile::GaugeProfile(const NswProfile& profile, double p, double r0)
    : prof_(profile), p_(p), r_hi_(10.0 * r0) {
  if (p <= 1.0) throw ConfigError("GaugeProfile: need p > 1");
  if (p >= profile.q_at_x())
    throw ExponentViolation("GaugeProfile: need p < Q(x) for a strictly increasing profile");
  if (profile.terms().size() == 1) {
    monomial_ = true;
    expo_ = (profile.terms()[0].exponent - p) / (p - 1.0);
    coeff_ = std::pow(profile.terms()[0].coeff, 1.0 / (p - 1.0));
  }
}

double GaugeProfile::E(double r) const {
  if (r <= 0.0) return 0.0;
  if (monomial_) return coeff_ * std::pow(r, expo_);
  return std::pow(prof_.lambda(r) / std::pow(r, p_), 1.0 / (p_ - 1.0));
}

double GaugeProfile::dE_over_E(double r) const {
  if (r <= 0.0) throw ConfigError("dE_over_E: r must be positive");
  if (monomial_) return expo_ / r;
  // E'/E = (Lambda'/Lambda - p/r) / (p-1)
  return (prof_.lambda_derivative(r) / prof_.lambda(r) - p_ / r) / (p_ - 1.0);
}

double GaugeProfile::F(double s) const {
  if (s <= 0.0) return 0.0;
  if (monomial_) return std::pow(s / coeff_, 1.0 / expo_);
  double lo = r_lo_, hi = r_hi_;
  if (E(lo) > s) return lo;
  if (E(hi) < s) throw ConfigError("GaugeProfile::F: value beyond the profile range");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (E(mid) < s) lo = mid;
    else hi = mid;
    if ((hi - lo) <= 1e-12 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double group_lambda_coefficient(const HTypeGroup& group) {
  static std::map<std::pair<int, int>, double> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(group.k(), group.q());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  // any sample point works: the profile of a Carnot frame is the same
  // monomial everywhere
  auto sys = group.frame();
  Point x0 = group.identity();
  auto basis = build_commutator_basis(sys, {x0}, 2);
  auto prof = nsw_profile(basis, x0);
  if (prof.terms().size() != 1)
    throw DegenerateBasis("group_lambda_coefficient: profile is not a monomial");
  cache[key] = prof.terms()[0].coeff;
  return cache[key];
}

RhoGauge rho_gauge(const HTypeGroup& group, double p, const Point& x, const Point& y) {
  const Point diff = group.product(group.inverse(x), y);
  const double N = group.kaplan_gauge(diff);
  if (N == 0.0) throw Singularity("rho_gauge: y = x");
  const double gamma = fundamental_solution(group, p, diff);
  if (gamma <= 0.0) throw ConfigError("rho_gauge: fundamental solution not positive here");
  GaugeProfile prof(group_lambda_coefficient(group), group.homogeneous_dim(), p);
  RhoGauge out;
  out.rho = prof.F(1.0 / gamma);
  out.gauge_ratio = out.rho / N;
  return out;
}

}  // namespace cch
