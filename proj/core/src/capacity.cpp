#include "cch/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cch/errors.hpp"
#include "cch/parallel.hpp"

namespace cch {

namespace {

double inner_raw(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Energy and exact-adjoint gradient of
// E_eps(u) = sum_{c inside} h^n (|Xu(c)|^2 + eps^2)^{p/2}.
class CapacityEnergy {
 public:
  CapacityEnergy(const GridDomain& dom, double p)
      : dom_(dom), lat_(dom.lattice()), frames_(dom.frames()), p_(p) {
    const int n = lat_.n();
    stride_.resize(n);
    std::size_t s = 1;
    for (int k = 0; k < n; ++k) {
      stride_[k] = s;
      s *= static_cast<std::size_t>(lat_.dims[k]);
    }
  }

  double energy(const std::vector<double>& u, double eps) const {
    const double w = lat_.cell_volume();
    const auto& cells = dom_.inside_cells();
    return parallel_block_sum(cells.size(), 8192, [&](std::size_t lo, std::size_t hi) {
      double acc = 0.0;
      for (std::size_t ci = lo; ci < hi; ++ci)
        acc += std::pow(grad_sq(u, cells[ci]) + eps * eps, 0.5 * p_);
      return acc * w;
    });
  }

  void gradient(const std::vector<double>& u, double eps, std::vector<double>& g,
                std::vector<double>& scratch) const {
    const int n = lat_.n(), m = frames_.m();
    const double w = lat_.cell_volume();
    scratch.assign(lat_.size() * n, 0.0);
    const auto& cells = dom_.inside_cells();
    // pass 1: G_k(c) = p w (|Xu|^2 + eps^2)^{(p-2)/2} sum_i X_i u(c) B_ki(c)
    parallel_for_blocks(cells.size(), 8192, [&](std::size_t, std::size_t lo, std::size_t hi) {
      std::vector<double> xu(m);
      for (std::size_t ci = lo; ci < hi; ++ci) {
        const std::size_t c = cells[ci];
        double g2 = 0.0;
        const double* B = frames_.frame(c);
        for (int i = 0; i < m; ++i) {
          double acc = 0.0;
          for (int k = 0; k < n; ++k)
            acc += B[i * n + k] * (u[c + stride_[k]] - u[c - stride_[k]]) / (2.0 * lat_.hs[k]);
          xu[i] = acc;
          g2 += acc * acc;
        }
        const double fac = p_ * w * std::pow(g2 + eps * eps, 0.5 * p_ - 1.0);
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int i = 0; i < m; ++i) acc += xu[i] * B[i * n + k];
          scratch[c * n + k] = fac * acc;
        }
      }
    });
    // pass 2: gather the adjoint at every lattice cell
    g.assign(lat_.size(), 0.0);
    parallel_for_blocks(lat_.size(), 16384, [&](std::size_t, std::size_t lo, std::size_t hi) {
      std::vector<int> idx(n);
      for (std::size_t c = lo; c < hi; ++c) {
        lat_.unindex(c, idx);
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
          if (idx[k] > 0) acc += scratch[(c - stride_[k]) * n + k] / (2.0 * lat_.hs[k]);
          if (idx[k] + 1 < lat_.dims[k])
            acc -= scratch[(c + stride_[k]) * n + k] / (2.0 * lat_.hs[k]);
        }
        g[c] = acc;
      }
    });
  }

  double grad_sq(const std::vector<double>& u, std::size_t c) const {
    const int n = lat_.n(), m = frames_.m();
    const double* B = frames_.frame(c);
    double g2 = 0.0;
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += B[i * n + k] * (u[c + stride_[k]] - u[c - stride_[k]]) / (2.0 * lat_.hs[k]);
      g2 += acc * acc;
    }
    return g2;
  }

 private:
  const GridDomain& dom_;
  const Lattice& lat_;
  const FrameCache& frames_;
  double p_;
  std::vector<std::size_t> stride_;
};

}  // namespace

CapacityResult p_capacity(std::shared_ptr<const GridDomain> domain, const Condenser& condenser,
                          double p, const CapacityOptions& opts) {
  if (p <= 1.0) throw ConfigError("p_capacity: need p > 1");
  const GridDomain& dom = *domain;
  const Lattice& lat = dom.lattice();
  CapacityResult out;
  out.minimizer = GridFunction(domain);
  if (condenser.plate_cells.empty()) return out;  // empty plate has zero capacity

  std::vector<std::uint8_t> is_plate(lat.size(), 0);
  for (std::size_t c : condenser.plate_cells) {
    if (!dom.inside(c)) throw ConfigError("p_capacity: plate cell outside the domain interior");
    is_plate[c] = 1;
  }

  // ramp initialization from the band distance and an eikonal plate distance
  std::vector<double> dist_plate(lat.size(), 0.0);
  {
    std::vector<EikCell> mode(lat.size(), EikCell::Excluded);
    for (std::size_t c : dom.inside_cells()) mode[c] = EikCell::Active;
    for (std::size_t c : condenser.plate_cells) mode[c] = EikCell::Source;
    EikonalOptions eopts;
    eopts.throw_on_nonconvergence = false;
    eopts.max_rounds = 200;
    solve_eikonal(lat, dom.frames(), mode, dist_plate, eopts);
  }

  std::vector<double> u(lat.size(), 0.0);
  for (std::size_t c : dom.inside_cells()) {
    const double a = dom.delta(c), b = std::min(dist_plate[c], 1e300);
    u[c] = std::clamp(a / std::max(a + b, 1e-300), 0.0, 1.0);
  }
  for (std::size_t c : condenser.plate_cells) u[c] = 1.0;

  CapacityEnergy energy(dom, p);

  double g_scale = 0.0;
  for (std::size_t c : dom.inside_cells()) g_scale += energy.grad_sq(u, c);
  g_scale = std::sqrt(g_scale / std::max<std::size_t>(1, dom.inside_cells().size()));
  if (g_scale == 0.0) g_scale = 1.0;

  std::vector<double> g, g_prev, d, scratch, u_trial;
  int total_iters = 0;
  double last_decrement = 0.0;
  bool budget_hit = false;
  double eps_final = 0.0;

  auto mask_fixed = [&](std::vector<double>& v) {
    for (std::size_t c = 0; c < lat.size(); ++c)
      if (!dom.inside(c) || is_plate[c]) v[c] = 0.0;
  };

  for (double eps_rel : opts.eps_stages) {
    // for p = 2 the smoothing only shifts the energy by a constant
    const double eps = (p == 2.0) ? 0.0 : eps_rel * g_scale;
    eps_final = eps;
    double E = energy.energy(u, eps);
    std::vector<double> hist{E};
    energy.gradient(u, eps, g, scratch);
    mask_fixed(g);
    d = g;
    for (auto& x : d) x = -x;
    double alpha = 1.0 / std::max(1e-30, std::sqrt(inner_raw(g, g)));
    int it = 0;
    for (; it < opts.max_iterations_per_stage; ++it) {
      const double gd = inner_raw(g, d);
      if (gd >= 0.0) {
        d = g;
        for (auto& x : d) x = -x;
        continue;
      }
      double step = alpha;
      double E_new = E;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls) {
        u_trial = u;
        for (std::size_t c : dom.inside_cells())
          if (!is_plate[c]) u_trial[c] = std::clamp(u[c] + step * d[c], 0.0, 1.0);
        E_new = energy.energy(u_trial, eps);
        if (E_new <= E + 1e-4 * step * gd) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;  // stage converged to line-search resolution
      u.swap(u_trial);
      alpha = step * 2.0;
      g_prev = g;
      energy.gradient(u, eps, g, scratch);
      mask_fixed(g);
      double num = 0.0, den = 0.0;
      for (std::size_t c = 0; c < g.size(); ++c) {
        num += g[c] * (g[c] - g_prev[c]);
        den += g_prev[c] * g_prev[c];
      }
      const double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
      for (std::size_t c = 0; c < d.size(); ++c) d[c] = -g[c] + beta * d[c];
      E = E_new;
      hist.push_back(E);
      const int w = opts.decrement_window;
      if (static_cast<int>(hist.size()) > w) {
        const double past = hist[hist.size() - 1 - static_cast<std::size_t>(w)];
        last_decrement = (past - E) / std::max(E, 1e-300);
        if (last_decrement < opts.decrement_tol) break;
      }
    }
    total_iters += it;
    if (it >= opts.max_iterations_per_stage && last_decrement >= opts.decrement_tol)
      budget_hit = true;
  }

  if (budget_hit && opts.throw_on_budget) {
    std::ostringstream os;
    os << "p_capacity: iteration budget exhausted with relative decrement " << last_decrement;
    throw NonConvergence(os.str());
  }

  out.value = energy.energy(u, 0.0);
  out.minimizer.values() = u;
  out.iterations = total_iters;
  out.final_decrement = last_decrement;
  out.eps_at_exit = eps_final;
  return out;
}

namespace {

class OracleBallShape final : public Shape {
 public:
  OracleBallShape(std::shared_ptr<const PointDistanceOracle> oracle, double radius)
      : oracle_(std::move(oracle)), r_(radius) {}
  bool contains(const Point& y) const override { return oracle_->bracket(y).mid() < r_; }
  void bounding_box(Point& lo, Point& hi) const override {
    const Point W = oracle_->bounding_halfwidths(r_);
    lo = oracle_->base() - W;
    hi = oracle_->base() + W;
  }
  std::string describe() const override { return "oracle-metric-ball"; }

 private:
  std::shared_ptr<const PointDistanceOracle> oracle_;
  double r_;
};

}  // namespace

std::shared_ptr<Shape> make_oracle_ball(std::shared_ptr<const PointDistanceOracle> oracle,
                                        double radius) {
  return std::make_shared<OracleBallShape>(std::move(oracle), radius);
}

AnnulusCheck annulus_check(std::shared_ptr<const VectorFieldSystem> sys, const Point& x, double r,
                           double p, const AnnulusOptions& opts) {
  AnnulusCheck out;
  double radius = r;
  for (int level = 0; level < opts.dyadic_levels; ++level, radius *= 0.5) {
    std::shared_ptr<const PointDistanceOracle> oracle = make_point_oracle(sys, x, 2.2 * radius);
    auto shape = make_oracle_ball(oracle, 2.0 * radius);
    auto dom = discretize(shape, radius / opts.cells_per_radius, sys);
    Condenser cond;
    std::size_t ball_cells = 0;
    for (std::size_t c : dom->inside_cells()) {
      const double d = oracle->bracket(dom->lattice().center(c)).mid();
      if (d <= radius) {
        cond.plate_cells.push_back(c);
        ++ball_cells;
      }
    }
    const double cap = p_capacity(dom, cond, p, opts.capacity).value;
    const double vol = static_cast<double>(ball_cells) * dom->lattice().cell_volume();
    out.radii.push_back(radius);
    out.ratios.push_back(vol > 0.0 ? cap / (vol * std::pow(radius, -p)) : 0.0);
  }
  double lo = 1e300, hi = 0.0;
  for (double v : out.ratios) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.stable_within_factor4 = lo > 0.0 && hi / lo <= 4.0;
  return out;
}

std::vector<Point> sample_boundary_points(const GridDomain& domain, int count) {
  const auto& band = domain.band_cells();
  std::vector<Point> centers;
  centers.reserve(band.size());
  for (std::size_t c : band) centers.push_back(domain.lattice().center(c));
  std::vector<Point> picked;
  if (centers.empty() || count <= 0) return picked;
  picked.push_back(centers.front());
  std::vector<double> dist(centers.size(), 1e300);
  while (static_cast<int>(picked.size()) < std::min<std::size_t>(count, centers.size())) {
    std::size_t best = 0;
    double bestd = -1.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      dist[i] = std::min(dist[i], (centers[i] - picked.back()).norm());
      if (dist[i] > bestd) {
        bestd = dist[i];
        best = i;
      }
    }
    if (bestd <= 0.0) break;
    picked.push_back(centers[best]);
  }
  return picked;
}

FatnessCertificate fatness_scan(const GridDomain& domain,
                                std::shared_ptr<const VectorFieldSystem> sys, double p,
                                const FatnessOptions& opts) {
  FatnessCertificate cert;
  cert.p = p;
  cert.r0 = domain.params().r0;
  std::vector<double> radii = opts.radii;
  if (radii.empty()) radii = {cert.r0 / 4, cert.r0 / 8, cert.r0 / 16};
  const auto samples = sample_boundary_points(domain, opts.boundary_samples);
  cert.c0 = 1e300;
  for (const auto& w : samples) {
    for (double r : radii) {
      std::shared_ptr<const PointDistanceOracle> oracle = make_point_oracle(sys, w, 2.2 * r);
      auto shape = make_oracle_ball(oracle, 2.0 * r);
      std::shared_ptr<GridDomain> dom;
      try {
        dom = discretize(shape, r / opts.cells_per_radius, sys);
      } catch (const DisconnectedDomain&) {
        continue;  // ball fragmented at this resolution; skip the sample
      }
      Condenser ball, complement;
      for (std::size_t c : dom->inside_cells()) {
        const Point y = dom->lattice().center(c);
        const double d = oracle->bracket(y).mid();
        if (d <= r) {
          ball.plate_cells.push_back(c);
          if (!domain.shape().contains(y)) complement.plate_cells.push_back(c);
        }
      }
      if (ball.plate_cells.empty()) continue;
      FatnessRow row;
      row.w = w;
      row.r = r;
      row.cap_ball = p_capacity(dom, ball, p, opts.capacity).value;
      row.cap_complement = p_capacity(dom, complement, p, opts.capacity).value;
      row.ratio = row.cap_ball > 0.0 ? row.cap_complement / row.cap_ball : 0.0;
      cert.c0 = std::min(cert.c0, row.ratio);
      cert.rows.push_back(std::move(row));
    }
  }
  if (cert.rows.empty()) cert.c0 = 0.0;
  return cert;
}

SelfImprovement self_improvement(const GridDomain& domain,
                                 std::shared_ptr<const VectorFieldSystem> sys, double p,
                                 const std::vector<double>& q_list, const FatnessOptions& opts) {
  SelfImprovement out;
  for (double q : q_list) {
    if (q > p) throw ConfigError("self_improvement: q must be <= p");
    out.table.emplace_back(q, fatness_scan(domain, sys, q, opts));
  }
  for (const auto& [q, cert] : out.table) {
    bool all_positive = !cert.rows.empty();
    for (const auto& row : cert.rows) all_positive = all_positive && row.ratio > 0.0;
    if (all_positive && (!out.smallest_fat_q || q < *out.smallest_fat_q))
      out.smallest_fat_q = q;
  }
  return out;
}

double DiscreteMeasure::total_mass() const {
  double acc = 0.0;
  for (double w : weights) acc += w;
  return acc;
}

}  // namespace cch
