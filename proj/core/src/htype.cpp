#include "cch/htype.hpp"

#include <cmath>

#include "cch/errors.hpp"
#include "cch/vector_field.hpp"

namespace cch {

namespace {

// Left multiplication by i, j, k on H^kappa viewed as R^{4 kappa}; pairwise
// anticommuting orthogonal complex structures.
Eigen::MatrixXd quaternion_unit(int kappa, int which) {
  const int d = 4 * kappa;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d, d);
  for (int b = 0; b < kappa; ++b) {
    const int o = 4 * b;
    auto set = [&](int r, int c, double v) { J(o + r, o + c) = v; };
    switch (which) {
      case 0:  // i: (1,x,y,z) -> (-x,1,z,-y) pattern
        set(0, 1, -1); set(1, 0, 1); set(2, 3, -1); set(3, 2, 1);
        break;
      case 1:  // j
        set(0, 2, -1); set(2, 0, 1); set(1, 3, 1); set(3, 1, -1);
        break;
      default:  // k
        set(0, 3, -1); set(3, 0, 1); set(1, 2, -1); set(2, 1, 1);
        break;
    }
  }
  return J;
}

}  // namespace

HTypeGroup::HTypeGroup(int k, int q) : k_(k), q_(q) {
  if (k < 1 || q < 1) throw ConfigError("HTypeGroup: need k >= 1 and q >= 1");
  const int d = 2 * k;
  if (q == 1) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(d, d);
    for (int b = 0; b < k; ++b) {
      J(2 * b, 2 * b + 1) = -1.0;
      J(2 * b + 1, 2 * b) = 1.0;
    }
    J_.push_back(std::move(J));
  } else if (q <= 3) {
    if (d % 4 != 0)
      throw ConfigError("HTypeGroup: q = 2 or 3 requires the first layer dimension 2k "
                        "to be a multiple of 4");
    for (int s = 0; s < q; ++s) J_.push_back(quaternion_unit(d / 4, s));
  } else {
    throw ConfigError("HTypeGroup: q > 3 not supported (needs a Clifford module beyond "
                      "the quaternionic construction)");
  }
}

Point HTypeGroup::identity() const { return Eigen::VectorXd::Zero(dim()); }

Point HTypeGroup::product(const Point& a, const Point& b) const {
  const int d = horiz_dim();
  Point r(dim());
  r.head(d) = a.head(d) + b.head(d);
  for (int s = 0; s < q_; ++s)
    r[d + s] = a[d + s] + b[d + s] + 0.5 * (J_[s] * a.head(d)).dot(b.head(d));
  return r;
}

Point HTypeGroup::inverse(const Point& a) const { return -a; }

Point HTypeGroup::dilate(double lambda, const Point& a) const {
  const int d = horiz_dim();
  Point r(dim());
  r.head(d) = lambda * a.head(d);
  r.tail(q_) = (lambda * lambda) * a.tail(q_);
  return r;
}

double HTypeGroup::kaplan_gauge(const Point& a) const {
  const int d = horiz_dim();
  const double x2 = a.head(d).squaredNorm();
  const double y2 = a.tail(q_).squaredNorm();
  return std::pow(x2 * x2 + 16.0 * y2, 0.25);
}

Eigen::VectorXd HTypeGroup::gauge_hgrad(const Point& a) const {
  const int d = horiz_dim();
  const double N = kaplan_gauge(a);
  if (N == 0.0) throw Singularity("gauge_hgrad: Kaplan gauge is singular at the identity");
  const double x2 = a.head(d).squaredNorm();
  // X_i N = (|x|^2 x_i + 4 (J_y x)_i) / N^3, with J_y = sum_s y_s J_s.
  Eigen::VectorXd Jyx = Eigen::VectorXd::Zero(d);
  for (int s = 0; s < q_; ++s) Jyx += a[d + s] * (J_[s] * a.head(d));
  return (x2 * a.head(d) + 4.0 * Jyx) / (N * N * N);
}

double HTypeGroup::gauge_hgrad_sq(const Point& a) const { return gauge_hgrad(a).squaredNorm(); }

VectorFieldSystem HTypeGroup::frame() const {
  const int n = dim();
  const int d = horiz_dim();
  std::vector<VectorField> fields;
  fields.reserve(d);
  for (int i = 0; i < d; ++i) {
    VectorField f;
    for (int r = 0; r < d; ++r) f.comps.push_back(Polynomial::constant(n, r == i ? 1.0 : 0.0));
    for (int s = 0; s < q_; ++s) {
      // coefficient of d/dy_s: (1/2) (J_s x)_i = (1/2) sum_t (J_s)_{it} x_t
      Polynomial c(n);
      for (int t = 0; t < d; ++t) {
        const double jst = J_[s](i, t);
        if (jst != 0.0) c = c + Polynomial::variable(n, t) * (0.5 * jst);
      }
      f.comps.push_back(std::move(c));
    }
    fields.push_back(std::move(f));
  }
  return VectorFieldSystem(n, std::move(fields));
}

}  // namespace cch
