#include "cch/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include <Eigen/Dense>

#include "cch/errors.hpp"

namespace cch {

namespace {

using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;

}  // namespace

Point reach_halfwidths(const VectorFieldSystem& sys, const Point& x, double r,
                       double* speed_out) {
  const int n = sys.ambient_dim();
  Point W = Point::Constant(n, r);
  double speed = 1.0;
  for (int it = 0; it < 4; ++it) {
    Point lo = x - W, hi = x + W;
    const Eigen::VectorXd rows = sys.row_norm_bound(lo, hi);
    speed = std::max(1e-12, rows.norm());
    bool grew = false;
    for (int k = 0; k < n; ++k) {
      // |y_k - x_k| <= r * sup row_k along any sub-unit path of length <= r;
      // the floor keeps degenerate axes from collapsing the lattice.
      const double wk = std::max(1.1 * r * rows[k], 1e-4 * r);
      if (wk > W[k] * (1.0 + 1e-9)) grew = true;
      W[k] = std::max(it == 0 ? 0.0 : W[k], wk);
    }
    if (it > 0 && !grew) break;
  }
  if (speed_out) *speed_out = speed;
  return 1.1 * W;
}

ChordGraphOracle::ChordGraphOracle(std::shared_ptr<const VectorFieldSystem> sys, Point base,
                                   double r_max, const ChordOracleOptions& opts)
    : sys_(std::move(sys)), x_(std::move(base)), r_max_(r_max), opts_(opts) {
  if (r_max <= 0.0) throw ConfigError("ChordGraphOracle: r_max must be positive");
  const int n = static_cast<int>(x_.size());
  const int m = sys_->num_fields();
  halfwidths_ = reach_halfwidths(*sys_, x_, r_max, &speed_bound_);
  quantum_ = r_max / opts.cells_per_radius;
  std::vector<double> hs(n);
  for (int k = 0; k < n; ++k) hs[k] = halfwidths_[k] / (1.1 * opts.cells_per_radius);
  Point lo(n), hi(n);
  for (int k = 0; k < n; ++k) {
    lo[k] = x_[k] - (halfwidths_[k] + hs[k]);
    hi[k] = x_[k] + (halfwidths_[k] + hs[k]);
  }
  lat_ = Lattice::covering(lo, hi, hs);
  std::vector<int> c0(n);
  for (int k = 0; k < n; ++k) {
    c0[k] = static_cast<int>(std::lround((x_[k] - lat_.origin[k]) / hs[k]));
    c0[k] = std::clamp(c0[k], 0, lat_.dims[k] - 1);
    lat_.origin[k] += x_[k] - (lat_.origin[k] + hs[k] * c0[k]);
  }

  // frame degree decides whether midpoint frames can be averaged exactly
  int max_degree = 0;
  for (const auto& f : sys_->fields())
    for (const auto& c : f.comps) max_degree = std::max(max_degree, c.degree());
  const bool linear_coeffs = max_degree <= 1;
  const FrameCache frames(lat_, *sys_);

  // first-layer brackets for closing range-orthogonal residuals
  std::vector<VectorField> brackets;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      VectorField br = lie_bracket(sys_->field(i), sys_->field(j));
      if (!br.is_zero()) brackets.push_back(std::move(br));
    }

  // stencil offsets: primitive integer vectors with |offset|_inf <= radius
  std::vector<std::vector<int>> offsets;
  {
    const int R = n <= 3 ? opts.stencil_radius : std::min(opts.stencil_radius, 2);
    std::vector<int> off(n, -R);
    for (;;) {
      bool zero = true;
      int g = 0;
      for (int k = 0; k < n; ++k) {
        if (off[k] != 0) zero = false;
        g = std::gcd(g, std::abs(off[k]));
      }
      if (!zero && g == 1) offsets.push_back(off);
      int k = 0;
      for (; k < n; ++k) {
        if (++off[k] <= R) break;
        off[k] = -R;
      }
      if (k == n) break;
    }
  }

  const std::size_t cells = lat_.size();
  dist_.assign(cells, 1e300);
  closure_.assign(cells, 0.0);
  const std::size_t src = lat_.index(c0);
  dist_[src] = 0.0;
  using QE = std::pair<double, std::size_t>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
  pq.push({0.0, src});
  const double cap = 1.4 * r_max + 8.0 * quantum_;

  std::vector<int> idx(n), jdx(n);
  Point delta(n), mid(n);
  SmallMat B(n, m), G(m, m);
  SmallVec rhs(m), v(m);
  Eigen::VectorXd resid(n);

  while (!pq.empty()) {
    const auto [d, c] = pq.top();
    pq.pop();
    if (d > dist_[c] || d > cap) continue;
    lat_.unindex(c, idx);
    const Point yc = lat_.center(idx);
    for (const auto& off : offsets) {
      bool ok = true;
      for (int k = 0; k < n; ++k) {
        jdx[k] = idx[k] + off[k];
        if (jdx[k] < 0 || jdx[k] >= lat_.dims[k]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const std::size_t cn = lat_.index(jdx);
      if (dist_[cn] <= d) continue;  // already settled at least as close
      for (int k = 0; k < n; ++k) delta[k] = off[k] * hs[k];
      // midpoint frame: exact average for linear coefficients
      if (linear_coeffs) {
        const double* Ba = frames.frame(c);
        const double* Bb = frames.frame(cn);
        for (int i = 0; i < m; ++i)
          for (int k = 0; k < n; ++k) B(k, i) = 0.5 * (Ba[i * n + k] + Bb[i * n + k]);
      } else {
        mid = yc + 0.5 * delta;
        for (int i = 0; i < m; ++i) {
          const Eigen::VectorXd col = sys_->field(i).eval(mid);
          for (int k = 0; k < n; ++k) B(k, i) = col[k];
        }
      }
      // least-squares chord control through the midpoint frame
      G.noalias() = B.transpose() * B;
      for (int i = 0; i < m; ++i) G(i, i) += 1e-14 * (G.trace() + 1e-300);
      rhs.noalias() = B.transpose() * delta;
      v = G.ldlt().solve(rhs);
      resid = delta - B * v;
      double w = v.norm();
      double closure_part = 0.0;
      const double rnorm = resid.norm();
      if (rnorm > 1e-9 * (delta.norm() + 1e-300)) {
        // close the residual through a commutator loop when reachable
        double br_cap = 0.0;
        const Point zmid = linear_coeffs ? Point(yc + 0.5 * delta) : mid;
        for (const auto& br : brackets)
          br_cap = std::max(br_cap, std::abs(br.eval(zmid).dot(resid) / rnorm));
        if (br_cap <= 1e-12) continue;  // needs step > 2, leave to other routes
        closure_part = 4.0 * std::sqrt(rnorm / br_cap);
        w += closure_part;
        used_closure_ = true;
      }
      const double nd = d + w;
      if (nd < dist_[cn]) {
        dist_[cn] = nd;
        closure_[cn] = closure_[c] + closure_part;
        if (nd <= cap) pq.push({nd, cn});
      }
    }
  }
}

double ChordGraphOracle::interpolate(const std::vector<double>& field, const Point& y) const {
  const int n = lat_.n();
  std::vector<int> base(n);
  std::vector<double> frac(n);
  for (int k = 0; k < n; ++k) {
    const double t = (y[k] - lat_.origin[k]) / lat_.hs[k];
    double fl = std::floor(t);
    int b = static_cast<int>(fl);
    double f = t - fl;
    if (b < 0) {
      b = 0;
      f = 0.0;
    }
    if (b > lat_.dims[k] - 2) {
      b = std::max(0, lat_.dims[k] - 2);
      f = 1.0;
    }
    if (lat_.dims[k] == 1) {
      b = 0;
      f = 0.0;
    }
    base[k] = b;
    frac[k] = f;
  }
  const int corners = 1 << n;
  double acc = 0.0;
  std::vector<int> idx(n);
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    for (int k = 0; k < n; ++k) {
      const bool hi = (c >> k) & 1;
      idx[k] = base[k] + (hi ? 1 : 0);
      if (idx[k] >= lat_.dims[k]) idx[k] = lat_.dims[k] - 1;
      w *= hi ? frac[k] : 1.0 - frac[k];
    }
    if (w == 0.0) continue;
    acc += w * field[lat_.index(idx)];
  }
  return acc;
}

double ChordGraphOracle::value_at(const Point& y) const { return interpolate(dist_, y); }

DistanceBracket ChordGraphOracle::bracket(const Point& y) const {
  // outside the reach box the point cannot lie in B(x, r_max)
  for (int k = 0; k < lat_.n(); ++k)
    if (std::abs(y[k] - x_[k]) > halfwidths_[k]) return {r_max_, 1e300};
  const double d = value_at(y);
  const double q = quantum_;
  // loop-closure overshoot applies only to the closure share of the path
  double rel_lo = opts_.rel_lower;
  if (used_closure_ && d > 0.0 && d < 1e200) {
    const double frac = std::clamp(interpolate(closure_, y) / d, 0.0, 1.0);
    rel_lo += 0.15 * frac;
  }
  if (d > r_max_ * (1.0 + rel_lo) + 2.0 * q || d > 1e200) return {r_max_, 1e300};
  const double euclid_lower = (y - x_).norm() / speed_bound_;
  DistanceBracket b;
  b.lower = std::max({0.0, (d - 0.5 * q) * (1.0 - rel_lo), euclid_lower});
  b.upper = (d + 0.5 * q) * (1.0 + opts_.rel_upper);
  return b;
}

std::unique_ptr<PointDistanceOracle> make_point_oracle(
    std::shared_ptr<const VectorFieldSystem> sys, const Point& base, double r_max,
    const ChordOracleOptions& opts) {
  if (sys->is_euclidean()) return std::make_unique<EuclideanPointOracle>(base);
  return std::make_unique<ChordGraphOracle>(std::move(sys), base, r_max, opts);
}

}  // namespace cch
