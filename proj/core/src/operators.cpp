#include "cch/operators.hpp"

#include <algorithm>
#include <cmath>

#include "cch/errors.hpp"
#include "cch/parallel.hpp"

namespace cch {

namespace {

std::vector<std::size_t> axis_strides(const Lattice& lat) {
  std::vector<std::size_t> stride(lat.n());
  std::size_t s = 1;
  for (int k = 0; k < lat.n(); ++k) {
    stride[k] = s;
    s *= static_cast<std::size_t>(lat.dims[k]);
  }
  return stride;
}

}  // namespace

HorizontalField x_gradient(const GridFunction& u) {
  const GridDomain& dom = u.domain();
  const Lattice& lat = dom.lattice();
  const FrameCache& frames = dom.frames();
  const int n = lat.n(), m = frames.m();
  HorizontalField g(u.domain_ptr(), m);
  const auto stride = axis_strides(lat);
  const std::vector<double>& v = u.values();

  parallel_for_blocks(lat.size(), 16384, [&](std::size_t, std::size_t lo, std::size_t hi) {
    std::vector<int> idx(n);
    std::vector<double> du(n);
    for (std::size_t c = lo; c < hi; ++c) {
      lat.unindex(c, idx);
      for (int k = 0; k < n; ++k) {
        const bool has_m = idx[k] > 0, has_p = idx[k] + 1 < lat.dims[k];
        const double hk = lat.hs[k];
        if (has_m && has_p) du[k] = (v[c + stride[k]] - v[c - stride[k]]) / (2.0 * hk);
        else if (has_p) du[k] = (v[c + stride[k]] - v[c]) / hk;
        else if (has_m) du[k] = (v[c] - v[c - stride[k]]) / hk;
        else du[k] = 0.0;
      }
      const double* B = frames.frame(c);
      for (int i = 0; i < m; ++i) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += B[i * n + k] * du[k];
        g.at(c, i) = acc;
      }
    }
  });
  return g;
}

GridFunction x_divergence(const HorizontalField& vf) {
  const GridDomain& dom = vf.domain();
  const Lattice& lat = dom.lattice();
  const FrameCache& frames = dom.frames();
  const int n = lat.n(), m = frames.m();
  const auto stride = axis_strides(lat);

  // w_k(c) = sum_i b_{ki}(c) v_i(c), then central differences of w_k.
  std::vector<double> w(lat.size() * n, 0.0);
  parallel_for_blocks(lat.size(), 16384, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t c = lo; c < hi; ++c) {
      const double* B = frames.frame(c);
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += B[i * n + k] * vf.at(c, i);
        w[c * n + k] = acc;
      }
    }
  });

  GridFunction out(vf.domain_ptr());
  parallel_for_blocks(lat.size(), 16384, [&](std::size_t, std::size_t lo, std::size_t hi) {
    std::vector<int> idx(n);
    for (std::size_t c = lo; c < hi; ++c) {
      lat.unindex(c, idx);
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        const bool has_m = idx[k] > 0, has_p = idx[k] + 1 < lat.dims[k];
        const double hk = lat.hs[k];
        if (has_m && has_p)
          acc += (w[(c + stride[k]) * n + k] - w[(c - stride[k]) * n + k]) / (2.0 * hk);
        else if (has_p) acc += (w[(c + stride[k]) * n + k] - w[c * n + k]) / hk;
        else if (has_m) acc += (w[c * n + k] - w[(c - stride[k]) * n + k]) / hk;
      }
      out[c] = acc;
    }
  });
  return out;
}

double integrate(const GridFunction& u, double p, const GridFunction* weight) {
  const GridDomain& dom = u.domain();
  const double cellvol = dom.lattice().cell_volume();
  double acc = 0.0;
  for (std::size_t c : dom.inside_cells()) {
    const double w = weight ? (*weight)[c] : 1.0;
    if (!std::isfinite(w)) throw NonFiniteWeight("integrate: non-finite weight at a cell");
    acc += w * std::pow(std::abs(u[c]), p);
  }
  return acc * cellvol;
}

double inner(const GridFunction& a, const GridFunction& b) {
  const GridDomain& dom = a.domain();
  double acc = 0.0;
  for (std::size_t c : dom.inside_cells()) acc += a[c] * b[c];
  return acc * dom.lattice().cell_volume();
}

double inner(const HorizontalField& a, const HorizontalField& b) {
  const GridDomain& dom = a.domain();
  double acc = 0.0;
  for (std::size_t c : dom.inside_cells())
    for (int i = 0; i < a.m(); ++i) acc += a.at(c, i) * b.at(c, i);
  return acc * dom.lattice().cell_volume();
}

WeakNorm weak_norm(const GridFunction& u, double s) {
  const GridDomain& dom = u.domain();
  const double cellvol = dom.lattice().cell_volume();
  std::vector<double> vals;
  vals.reserve(dom.inside_cells().size());
  for (std::size_t c : dom.inside_cells()) vals.push_back(std::abs(u[c]));
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  WeakNorm out;
  if (vals.empty()) return out;
  if (!(s > 0.0)) throw ConfigError("weak_norm: s must be positive");
  if (std::isinf(s)) {
    out.level_form = out.sup_form = vals.front();
    return out;
  }
  // superlevel sets: after sorting, E_k = {cells with |u| >= vals[k]} has
  // measure (k+1) h^n; sup_t t |{|u|>t}|^{1/s} is attained approaching a
  // value from below.
  const double r = 0.5 * s;
  double run_r = 0.0;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    const double measure = static_cast<double>(k + 1) * cellvol;
    out.level_form = std::max(out.level_form, vals[k] * std::pow(measure, 1.0 / s));
    run_r += std::pow(vals[k], r);
    const double int_r = std::pow(run_r * cellvol, 1.0 / r);
    out.sup_form = std::max(out.sup_form, std::pow(measure, 1.0 / s - 1.0 / r) * int_r);
  }
  return out;
}

MetricBallAverager::MetricBallAverager(std::shared_ptr<const GridDomain> dom, const Point& center,
                                       double r_max)
    : dom_(std::move(dom)) {
  const Lattice& lat = dom_->lattice();
  d_.assign(lat.size(), 1e300);
  auto oracle = make_point_oracle(
      std::shared_ptr<const VectorFieldSystem>(dom_, &dom_->system()), center,
      std::max(r_max, 4.0 * lat.h_max()));
  for (std::size_t c = 0; c < lat.size(); ++c) {
    if (dom_->kind(c) == CellKind::Outside) continue;
    d_[c] = oracle->bracket(lat.center(c)).mid();
  }
}

double MetricBallAverager::average(const GridFunction& u, double r) const {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < d_.size(); ++c) {
    if (d_[c] < r) {
      acc += std::abs(u[c]);
      ++count;
    }
  }
  return count ? acc / static_cast<double>(count) : 0.0;
}

double MetricBallAverager::maximal(const GridFunction& u, double R) const {
  const double h = dom_->h();
  double best = 0.0;
  for (double rho = R; rho >= 2.0 * h; rho *= 0.5) best = std::max(best, average(u, rho));
  // always include the smallest admissible ball so M(u) >= |u| locally
  best = std::max(best, average(u, 2.0 * h));
  return best;
}

GridFunction truncated_maximal(const GridFunction& u, double R) {
  const GridDomain& dom = u.domain();
  const Lattice& lat = dom.lattice();
  GridFunction out(u.domain_ptr());
  const auto& cells = dom.inside_cells();
  parallel_for_blocks(cells.size(), 64, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t ci = lo; ci < hi; ++ci) {
      const std::size_t c = cells[ci];
      MetricBallAverager avg(u.domain_ptr(), lat.center(c), R);
      out[c] = avg.maximal(u, R);
    }
  });
  return out;
}

}  // namespace cch
