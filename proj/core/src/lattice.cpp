#include "cch/lattice.hpp"

#include <cmath>

#include "cch/errors.hpp"
#include "cch/parallel.hpp"

namespace cch {

Lattice Lattice::covering(const Point& lo, const Point& hi, double h) {
  return covering(lo, hi, std::vector<double>(lo.size(), h));
}

Lattice Lattice::covering(const Point& lo, const Point& hi, const std::vector<double>& h) {
  const int n = static_cast<int>(lo.size());
  Lattice lat;
  lat.hs = h;
  lat.origin = Point(n);
  lat.dims.resize(n);
  for (int k = 0; k < n; ++k) {
    if (h[k] <= 0.0) throw ConfigError("Lattice::covering: spacing must be positive");
    const double len = hi[k] - lo[k];
    if (len <= 0.0) throw ConfigError("Lattice::covering: empty box");
    const int cells = std::max(1, static_cast<int>(std::ceil(len / h[k])));
    lat.dims[k] = cells;
    // center the cell block on the box
    lat.origin[k] = 0.5 * (lo[k] + hi[k]) - 0.5 * h[k] * (cells - 1);
  }
  return lat;
}

FrameCache::FrameCache(const Lattice& lat, const VectorFieldSystem& sys)
    : n_(sys.ambient_dim()), m_(sys.num_fields()) {
  if (lat.n() != n_) throw ConfigError("FrameCache: lattice/system dimension mismatch");
  const std::size_t cells = lat.size();
  data_.resize(cells * n_ * m_);
  std::vector<double> rmax_all(lat.size() ? static_cast<std::size_t>(n_) : 0, 0.0);
  row_max_.assign(n_, 0.0);
  std::vector<double> block_rmax;
  parallel_for_blocks(cells, 8192, [&](std::size_t, std::size_t lo_i, std::size_t hi_i) {
    std::vector<int> idx;
    for (std::size_t c = lo_i; c < hi_i; ++c) {
      const Point x = lat.center(c);
      double* out = data_.data() + c * n_ * m_;
      for (int i = 0; i < m_; ++i) {
        const Eigen::VectorXd v = sys.field(i).eval(x);
        for (int k = 0; k < n_; ++k) out[i * n_ + k] = v[k];
      }
    }
  });
  for (std::size_t c = 0; c < cells; ++c) {
    const double* B = frame(c);
    for (int k = 0; k < n_; ++k) {
      double s = 0.0;
      for (int i = 0; i < m_; ++i) s += B[i * n_ + k] * B[i * n_ + k];
      row_max_[k] = std::max(row_max_[k], std::sqrt(s));
    }
  }
}

}  // namespace cch
