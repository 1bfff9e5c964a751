#pragma once

#include <cstdint>
#include <vector>

#include "cch/vector_field.hpp"

namespace cch {

// Cell-centered lattice in R^n; spacing may differ per axis (metric balls of
// degenerate frames are strongly anisotropic).
struct Lattice {
  Point origin;             // center of cell (0,...,0)
  std::vector<double> hs;   // spacing per axis
  std::vector<int> dims;    // cells per axis

  int n() const { return static_cast<int>(dims.size()); }
  double h(int k) const { return hs[k]; }
  // Largest spacing; equals the uniform spacing for grid-module lattices.
  double h_max() const {
    double m = 0.0;
    for (double v : hs) m = std::max(m, v);
    return m;
  }
  std::size_t size() const {
    std::size_t s = 1;
    for (int d : dims) s *= static_cast<std::size_t>(d);
    return s;
  }
  std::size_t index(const std::vector<int>& idx) const {
    std::size_t lin = 0, stride = 1;
    for (int k = 0; k < n(); ++k) {
      lin += static_cast<std::size_t>(idx[k]) * stride;
      stride *= static_cast<std::size_t>(dims[k]);
    }
    return lin;
  }
  void unindex(std::size_t lin, std::vector<int>& idx) const {
    idx.resize(dims.size());
    for (int k = 0; k < n(); ++k) {
      idx[k] = static_cast<int>(lin % dims[k]);
      lin /= dims[k];
    }
  }
  Point center(const std::vector<int>& idx) const {
    Point x = origin;
    for (int k = 0; k < n(); ++k) x[k] += hs[k] * idx[k];
    return x;
  }
  Point center(std::size_t lin) const {
    std::vector<int> idx;
    unindex(lin, idx);
    return center(idx);
  }
  bool in_bounds(const std::vector<int>& idx) const {
    for (int k = 0; k < n(); ++k)
      if (idx[k] < 0 || idx[k] >= dims[k]) return false;
    return true;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int k = 0; k < n(); ++k) v *= hs[k];
    return v;
  }

  // Lattice of cell centers covering [lo,hi] with uniform spacing h.
  static Lattice covering(const Point& lo, const Point& hi, double h);
  // Per-axis spacing variant.
  static Lattice covering(const Point& lo, const Point& hi, const std::vector<double>& h);
};

// Frame matrices B(x) cached per cell (column i = X_i at the cell center).
class FrameCache {
 public:
  FrameCache(const Lattice& lat, const VectorFieldSystem& sys);

  int n() const { return n_; }
  int m() const { return m_; }
  const double* frame(std::size_t cell) const { return data_.data() + cell * n_ * m_; }
  // entry (row k, column i)
  double at(std::size_t cell, int k, int i) const { return frame(cell)[i * n_ + k]; }
  // max over cells of the norm of row k
  const std::vector<double>& row_norm_max() const { return row_max_; }

 private:
  int n_ = 0, m_ = 0;
  std::vector<double> data_;
  std::vector<double> row_max_;
};

}  // namespace cch
