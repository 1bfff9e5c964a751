#include "cch/cc_path.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "cch/errors.hpp"
#include "cch/rng.hpp"

namespace cch {

std::vector<Point> SubUnitPath::trajectory(const VectorFieldSystem& sys) const {
  std::vector<Point> pts{start};
  Point x = start;
  for (const auto& u : controls) {
    // midpoint rule
    const Eigen::VectorXd k1 = sys.eval_frame(x) * u;
    const Eigen::VectorXd k2 = sys.eval_frame(x + 0.5 * timestep * k1) * u;
    x = x + timestep * k2;
    pts.push_back(x);
  }
  return pts;
}

namespace {

struct Rollout {
  std::vector<Point> xs;  // size K+1
  Point terminal;
};

// Per-call cache of field component derivatives d b_{ri} / d x_c.
struct SysJets;
Rollout roll(const VectorFieldSystem& sys, const Point& x0,
             const std::vector<Eigen::VectorXd>& u);

// Per-call cache of field component derivatives d b_{ri} / d x_c.
struct SysJets {
  explicit SysJets(const VectorFieldSystem& sys) {
    const int n = sys.ambient_dim();
    d.resize(sys.num_fields());
    for (int i = 0; i < sys.num_fields(); ++i) {
      d[i].resize(n);
      for (int r = 0; r < n; ++r) {
        d[i][r].reserve(n);
        for (int c = 0; c < n; ++c) d[i][r].push_back(sys.field(i).comps[r].derivative(c));
      }
    }
  }
  std::vector<std::vector<std::vector<Polynomial>>> d;  // [field][row][var]
};

// d/dx of (B(x) u) as an n x n matrix.
Eigen::MatrixXd flow_jacobian(const SysJets& jets, int n, const Point& x,
                              const Eigen::VectorXd& u) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < static_cast<int>(jets.d.size()); ++i) {
    if (u[i] == 0.0) continue;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const Polynomial& p = jets.d[i][r][c];
        if (!p.is_zero()) J(r, c) += u[i] * p.eval(x);
      }
  }
  return J;
}

// Midpoint-rule rollout; the step vector u_s carries its duration
// (|u_s| = sub-unit time of step s), matching SubUnitPath::trajectory.
Rollout roll(const VectorFieldSystem& sys, const Point& x0,
             const std::vector<Eigen::VectorXd>& u) {
  Rollout r;
  r.xs.reserve(u.size() + 1);
  r.xs.push_back(x0);
  Point x = x0;
  for (const auto& us : u) {
    const Point mid = x + 0.5 * (sys.eval_frame(x) * us);
    x = x + sys.eval_frame(mid) * us;
    r.xs.push_back(x);
  }
  r.terminal = x;
  return r;
}

// Exact step Jacobians of the midpoint map
// x' = x + B(x + (1/2) B(x) u) u.
void step_jacobians(const VectorFieldSystem& sys, const SysJets& jets, const Point& x,
                    const Eigen::VectorXd& u, Eigen::MatrixXd& A, Eigen::MatrixXd& Bu) {
  const int n = sys.ambient_dim();
  const Eigen::MatrixXd Bx = sys.eval_frame(x);
  const Point mid = x + 0.5 * (Bx * u);
  const Eigen::MatrixXd Bm = sys.eval_frame(mid);
  const Eigen::MatrixXd Jm = flow_jacobian(jets, n, mid, u);
  const Eigen::MatrixXd Jx = flow_jacobian(jets, n, x, u);
  A = Eigen::MatrixXd::Identity(n, n) + Jm * (Eigen::MatrixXd::Identity(n, n) + 0.5 * Jx);
  Bu = Bm + Jm * (0.5 * Bx);
}

double path_length(const std::vector<Eigen::VectorXd>& u) {
  double L = 0.0;
  for (const auto& us : u) L += us.norm();
  return L;
}

// Gauss-Newton closure of the terminal constraint: min-norm control update
// solving x_K(u + du) = y to first order, iterated. Exact in one step for
// constant frames.
void close_terminal(const VectorFieldSystem& sys, const SysJets& jets, const Point& x,
                    const Point& y, std::vector<Eigen::VectorXd>& u, int max_iter = 10,
                    double tol = 1e-10) {
  const int n = sys.ambient_dim();
  const int m = sys.num_fields();
  const int K = static_cast<int>(u.size());
  for (int it = 0; it < max_iter; ++it) {
    const Rollout r = roll(sys, x, u);
    const Eigen::VectorXd miss = y - r.terminal;
    if (miss.norm() <= tol * (1.0 + y.norm())) return;
    // P_{s+1} = A_{K-1} ... A_{s+1}, accumulated backwards
    std::vector<Eigen::MatrixXd> G(K);  // G_s = P_{s+1} dx'/du at step s
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd A, Bu;
    for (int s = K - 1; s >= 0; --s) {
      step_jacobians(sys, jets, r.xs[s], u[s], A, Bu);
      G[s] = P * Bu;
      P = P * A;
    }
    Eigen::MatrixXd MMt = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < K; ++s) MMt += G[s] * G[s].transpose();
    MMt += 1e-12 * MMt.trace() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd w = MMt.ldlt().solve(miss);
    for (int s = 0; s < K; ++s) u[s] += G[s].transpose() * w;
  }
}

}  // namespace

CcDistanceResult cc_distance(const VectorFieldSystem& sys, const Point& x, const Point& y,
                             const CcDistanceOptions& opts) {
  const int n = sys.ambient_dim();
  const int m = sys.num_fields();
  const int K = opts.steps;
  const double sep = (y - x).norm();

  CcDistanceResult out;
  // lower bound: Euclidean separation over the max frame operator norm along
  // the straight segment
  double seg_speed = 0.0;
  for (int s = 0; s <= 32; ++s) {
    const Point z = x + (y - x) * (static_cast<double>(s) / 32.0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.eval_frame(z));
    seg_speed = std::max(seg_speed, svd.singularValues().size() ? svd.singularValues()[0] : 0.0);
  }
  out.lower = seg_speed > 0.0 ? sep / seg_speed : 0.0;

  if (sep == 0.0) {
    out.witness.start = x;
    out.witness.timestep = 0.0;
    return out;
  }

  // greedy tracking initialization: least-squares control toward the target
  auto greedy_init = [&]() {
    std::vector<Eigen::VectorXd> u(K, Eigen::VectorXd::Zero(m));
    Point z = x;
    for (int s = 0; s < K; ++s) {
      const Eigen::MatrixXd B = sys.eval_frame(z);
      const Eigen::VectorXd step = (y - z) / static_cast<double>(K - s);
      u[s] = B.completeOrthogonalDecomposition().solve(step);
      z = z + B * u[s];
    }
    return u;
  };

  Rng rng(opts.seed);
  std::vector<std::vector<Eigen::VectorXd>> starts;
  starts.push_back(greedy_init());
  for (int r = 0; r < opts.restarts; ++r) {
    std::vector<Eigen::VectorXd> u(K, Eigen::VectorXd::Zero(m));
    const double amp = sep * (0.5 + rng.next_double()) / K;
    for (auto& us : u)
      for (int i = 0; i < m; ++i) us[i] = amp * (2.0 * rng.next_double() - 1.0);
    starts.push_back(std::move(u));
  }

  const double miss_tol = std::max(opts.reach_tol * sep, 1e-12);
  double best_len = -1.0;
  std::vector<Eigen::VectorXd> best_u;
  double best_miss = 1e300;
  const SysJets jets(sys);

  for (auto& u0 : starts) {
    std::vector<Eigen::VectorXd> u = u0;
    // penalty continuation; eps smooths the |u| term near zero steps
    for (double mu : {30.0, 300.0, 3000.0, 30000.0}) {
      const double mu_scaled = mu / (sep * sep);
      const double eps = 1e-3 * sep / K;
      // Adam
      std::vector<Eigen::VectorXd> mom(K, Eigen::VectorXd::Zero(m)),
          vel(K, Eigen::VectorXd::Zero(m));
      double lr = 0.08 * sep / K;
      double prev_obj = 1e300;
      int stall = 0;
      for (int it = 0; it < opts.max_iterations; ++it) {
        Rollout r = roll(sys, x, u);
        const double obj =
            path_length(u) + mu_scaled * (r.terminal - y).squaredNorm();
        if (obj > prev_obj - 1e-7 * std::abs(prev_obj)) {
          if (++stall >= 12) break;
        } else {
          stall = 0;
        }
        prev_obj = std::min(prev_obj, obj);
        // adjoint for mu * ||x_K - y||^2
        std::vector<Eigen::VectorXd> grad(K);
        Eigen::VectorXd lam = 2.0 * mu_scaled * (r.terminal - y);
        Eigen::MatrixXd A, Bu;
        for (int s = K - 1; s >= 0; --s) {
          step_jacobians(sys, jets, r.xs[s], u[s], A, Bu);
          grad[s] = Bu.transpose() * lam;
          lam = A.transpose() * lam;
        }
        for (int s = 0; s < K; ++s)
          grad[s] += u[s] / std::sqrt(u[s].squaredNorm() + eps * eps);
        const double b1 = 0.9, b2 = 0.999;
        const double bc1 = 1.0 - std::pow(b1, it + 1), bc2 = 1.0 - std::pow(b2, it + 1);
        for (int s = 0; s < K; ++s) {
          mom[s] = b1 * mom[s] + (1 - b1) * grad[s];
          vel[s] = b2 * vel[s].eval() + (1 - b2) * grad[s].cwiseProduct(grad[s]).eval();
          for (int i = 0; i < m; ++i)
            u[s][i] -= lr * (mom[s][i] / bc1) / (std::sqrt(vel[s][i] / bc2) + 1e-12);
        }
      }
    }
    close_terminal(sys, jets, x, y, u);
    const Rollout r = roll(sys, x, u);
    const double miss = (r.terminal - y).norm();
    const double len = path_length(u);
    best_miss = std::min(best_miss, miss);
    if (miss <= miss_tol && (best_len < 0.0 || len < best_len)) {
      best_len = len;
      best_u = u;
    }
  }

  if (best_len < 0.0) {
    throw NoPathFound("cc_distance: optimizer missed the target by " + std::to_string(best_miss) +
                      " (tolerance " + std::to_string(miss_tol) +
                      ") within the step budget; increase steps/iterations");
  }

  out.terminal_miss = best_miss;
  out.upper = std::max(best_len, out.lower);

  // repackage as a unit-speed piecewise-constant control path
  SubUnitPath w;
  w.start = x;
  w.timestep = best_len / K;
  w.controls.reserve(K);
  // resample the duration-weighted controls onto a uniform time grid
  {
    std::vector<double> cum{0.0};
    for (const auto& us : best_u) cum.push_back(cum.back() + us.norm());
    int seg = 0;
    for (int s = 0; s < K; ++s) {
      const double t = (s + 0.5) * w.timestep;
      while (seg + 1 < static_cast<int>(best_u.size()) && cum[seg + 1] < t) ++seg;
      const double nrm = best_u[seg].norm();
      w.controls.push_back(nrm > 0 ? Eigen::VectorXd(best_u[seg] / nrm)
                                   : Eigen::VectorXd::Zero(m));
    }
  }
  out.witness = std::move(w);
  return out;
}

}  // namespace cch
