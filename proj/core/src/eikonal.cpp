#include "cch/eikonal.hpp"

#include <algorithm>
#include <cmath>

#include "cch/errors.hpp"

namespace cch {

namespace {
constexpr double kBig = 1e30;
}

EikonalStats solve_eikonal(const Lattice& lat, const FrameCache& frames,
                           const std::vector<EikCell>& mode, std::vector<double>& dist,
                           const EikonalOptions& opts) {
  const int n = lat.n();
  const int m = frames.m();
  const std::size_t cells = lat.size();
  if (mode.size() != cells || dist.size() != cells)
    throw ConfigError("solve_eikonal: size mismatch");

  std::vector<std::size_t> stride(n);
  {
    std::size_t s = 1;
    for (int k = 0; k < n; ++k) {
      stride[k] = s;
      s *= static_cast<std::size_t>(lat.dims[k]);
    }
  }

  // Local Lax-Friedrichs viscosity: per-cell frame row norms, maximized over
  // the face neighbors along the axis. This dominates |dH/dp_k| on the
  // stencil (monotone update) without the global anisotropy penalty that
  // stalls convergence near degenerate planes. A small floor keeps the
  // denominator positive on axes where the frame vanishes locally.
  std::vector<double> row(cells * n);
  double global_max = 0.0;
  std::vector<double> axis_max(n, 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    const double* B = frames.frame(c);
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += B[i * n + k] * B[i * n + k];
      row[c * n + k] = std::sqrt(s);
      global_max = std::max(global_max, row[c * n + k]);
      axis_max[k] = std::max(axis_max[k], row[c * n + k]);
    }
  }
  if (global_max == 0.0) throw ConfigError("solve_eikonal: identically zero frame");
  const double floor_sigma = 1e-3 * global_max;

  // Convergence quantum: finest per-cell crossing time of the lattice.
  double h = 1e300;
  for (int k = 0; k < n; ++k) h = std::min(h, lat.hs[k] / std::max(axis_max[k], floor_sigma));

  for (std::size_t c = 0; c < cells; ++c)
    if (mode[c] != EikCell::Source) dist[c] = kBig;

  std::vector<double> p(n), sig(n);
  std::vector<int> idx(n);

  auto update_cell = [&](std::size_t c) -> double {
    const double dc = dist[c];
    double visc = 0.0, denom = 0.0;
    // untouched sentinel: skip only while the whole stencil is pristine
    bool any_touched = dc != kBig;
    for (int k = 0; k < n; ++k) {
      double plus = dc, minus = dc;
      double sk = row[c * n + k];
      if (idx[k] + 1 < lat.dims[k]) {
        const std::size_t cn = c + stride[k];
        if (mode[cn] != EikCell::Excluded) {
          plus = dist[cn];
          sk = std::max(sk, row[cn * n + k]);
        }
      }
      if (idx[k] - 1 >= 0) {
        const std::size_t cn = c - stride[k];
        if (mode[cn] != EikCell::Excluded) {
          minus = dist[cn];
          sk = std::max(sk, row[cn * n + k]);
        }
      }
      if (plus != kBig || minus != kBig) any_touched = true;
      sk = std::max(sk, floor_sigma);
      sig[k] = sk;
      const double hk = lat.hs[k];
      p[k] = (plus - minus) / (2.0 * hk);
      visc += sk * (plus + minus) / (2.0 * hk);
      denom += sk / hk;
    }
    if (!any_touched) return dc;  // no information in the stencil yet
    const double* B = frames.frame(c);
    double H2 = 0.0;
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += B[i * n + k] * p[k];
      H2 += acc * acc;
    }
    const double cand = (1.0 - std::sqrt(H2) + visc) / denom;
    return std::min(dc, cand);
  };

  EikonalStats stats;
  const int orderings = 1 << n;
  const bool capped = opts.value_cap < 1e299;
  // Cells in flight just above the cap still count toward the residual so a
  // front cannot stall unseen right outside the capped zone.
  const double cap_measure = capped ? 2.5 * opts.value_cap : 1e300;
  // With a capped residual the early rounds can look quiet while fronts are
  // still crossing the lattice; demand at least one traversal first.
  int min_rounds = 1;
  if (capped)
    for (int k = 0; k < n; ++k) min_rounds = std::max(min_rounds, lat.dims[k]);
  int quiet = 0;
  for (int round = 0; round < opts.max_rounds; ++round) {
    double max_change = 0.0;
    for (int ord = 0; ord < orderings; ++ord) {
      std::vector<int> dir(n);
      for (int k = 0; k < n; ++k) dir[k] = (ord >> k) & 1 ? -1 : 1;
      for (int k = 0; k < n; ++k) idx[k] = dir[k] > 0 ? 0 : lat.dims[k] - 1;
      std::size_t c = lat.index(idx);
      for (;;) {
        if (mode[c] == EikCell::Active) {
          const double nv = update_cell(c);
          if (nv <= cap_measure) {
            const double ch = dist[c] - nv;
            if (ch > max_change) max_change = ch;
          }
          dist[c] = nv;
        }
        int k = 0;
        for (; k < n; ++k) {
          idx[k] += dir[k];
          if (idx[k] >= 0 && idx[k] < lat.dims[k]) break;
          idx[k] = dir[k] > 0 ? 0 : lat.dims[k] - 1;
        }
        if (k == n) break;
        if (k == 0)
          c = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + dir[0]);
        else
          c = lat.index(idx);
      }
    }
    stats.rounds = round + 1;
    stats.fixed_point_residual = max_change / h;
    if (max_change <= opts.tol * h && stats.rounds >= min_rounds) {
      if (++quiet >= (capped ? opts.settle_rounds : 1)) {
        stats.converged = true;
        break;
      }
    } else if (max_change > opts.tol * h) {
      quiet = 0;
    }
  }
  if (!stats.converged && opts.throw_on_nonconvergence)
    throw NonConvergence("eikonal sweeping did not reach fixed-point residual " +
                         std::to_string(opts.tol) + " within " +
                         std::to_string(opts.max_rounds) + " rounds (last residual " +
                         std::to_string(stats.fixed_point_residual) + ")");

  // Gradient residual report over active cells (informational; cannot vanish
  // at ridges of the distance function).
  std::vector<double> res;
  res.reserve(cells / 4);
  for (std::size_t c = 0; c < cells; ++c) {
    if (mode[c] != EikCell::Active || dist[c] >= kBig * 0.5) continue;
    if (capped && dist[c] > opts.value_cap) continue;
    lat.unindex(c, idx);
    double H2 = 0.0;
    const double* B = frames.frame(c);
    for (int k = 0; k < n; ++k) {
      double plus = dist[c], minus = dist[c];
      if (idx[k] + 1 < lat.dims[k] && mode[c + stride[k]] != EikCell::Excluded)
        plus = std::min(dist[c + stride[k]], kBig);
      if (idx[k] - 1 >= 0 && mode[c - stride[k]] != EikCell::Excluded)
        minus = std::min(dist[c - stride[k]], kBig);
      p[k] = (plus - minus) / (2.0 * lat.hs[k]);
    }
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += B[i * n + k] * p[k];
      H2 += acc * acc;
    }
    res.push_back(std::abs(std::sqrt(H2) - 1.0));
  }
  if (!res.empty()) {
    stats.grad_residual_max = *std::max_element(res.begin(), res.end());
    auto mid = res.begin() + res.size() / 2;
    std::nth_element(res.begin(), mid, res.end());
    stats.grad_residual_median = *mid;
  }
  return stats;
}

}  // namespace cch
