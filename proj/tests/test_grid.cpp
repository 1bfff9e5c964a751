#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "cch/errors.hpp"
#include "cch/htype.hpp"
#include "cch/operators.hpp"
#include "cch/rng.hpp"

using namespace cch;

namespace {

std::shared_ptr<GridDomain> unit_box(const std::string& sysname, double h) {
  auto sys = std::make_shared<VectorFieldSystem>(builtin_system(sysname));
  return discretize(make_box(make_point({-1, -1, -1}), make_point({1, 1, 1})), h, sys);
}

GridFunction fill(const std::shared_ptr<GridDomain>& dom,
                  const std::function<double(const Point&)>& f, bool zero_boundary = true) {
  GridFunction u(dom);
  for (std::size_t c = 0; c < dom->cells(); ++c) u[c] = f(dom->lattice().center(c));
  if (zero_boundary) u.zero_boundary();
  return u;
}

}  // namespace

TEST_CASE("gradient of constants and linear functions") {
  auto dom = unit_box("euclidean3", 1.0 / 8);
  GridFunction c(dom);
  for (std::size_t i = 0; i < dom->cells(); ++i) c[i] = 3.5;
  auto g = x_gradient(c);
  for (std::size_t i : dom->inside_cells()) CHECK(g.norm_sq(i) == 0.0);

  // u = x1: central differences are exact on linear functions
  auto u = fill(dom, [](const Point& x) { return x[0]; }, false);
  auto gu = x_gradient(u);
  for (std::size_t i : dom->inside_cells()) {
    CHECK(gu.at(i, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gu.at(i, 1) == doctest::Approx(0.0));
    CHECK(gu.at(i, 2) == doctest::Approx(0.0));
  }
}

TEST_CASE("H-type gradient of N^2 converges at second order") {
  HTypeGroup grp(1, 1);
  double prev_err = -1.0;
  for (double h : {1.0 / 8, 1.0 / 16}) {
    auto sys = std::make_shared<VectorFieldSystem>(grp.frame());
    auto dom = discretize(make_box(make_point({-1, -1, -1}), make_point({1, 1, 1})), h, sys);
    auto u = fill(dom, [&](const Point& x) { return std::pow(grp.kaplan_gauge(x), 2.0); }, false);
    auto gu = x_gradient(u);
    double err = 0.0;
    for (std::size_t c : dom->inside_cells()) {
      const Point x = dom->lattice().center(c);
      const double N = grp.kaplan_gauge(x);
      // smooth annulus away from the center axis, where third derivatives of
      // N^2 stay uniformly bounded and central differences are O(h^2)
      if (N < 0.4 || N > 0.9 || x.head(2).norm() < 0.3) continue;
      const Eigen::VectorXd expect = 2.0 * grp.kaplan_gauge(x) * grp.gauge_hgrad(x);
      Eigen::VectorXd got(2);
      got << gu.at(c, 0), gu.at(c, 1);
      err = std::max(err, (got - expect).norm());
    }
    if (prev_err > 0.0) CHECK(err < 0.33 * prev_err);  // ~O(h^2)
    prev_err = err;
  }
}

TEST_CASE("integration by parts: defect at most O(h), here exact by telescoping") {
  // central differences of the product B v telescope against central
  // differences of u with no product-rule remainder, so compactly supported
  // pairs integrate by parts to machine precision; the O(h) bound holds with
  // room to spare
  for (double h : {1.0 / 6, 1.0 / 12, 1.0 / 24}) {
    auto dom = unit_box("heisenberg1", h);
    auto u = fill(dom, [](const Point& x) {
      return std::cos(1.3 * x[0]) * std::sin(0.7 * x[1]) * (1 - x[2] * x[2]);
    });
    auto v1 = fill(dom, [](const Point& x) { return std::sin(x[0] + x[1]) * (1 - x[0] * x[0]); });
    auto v2 = fill(dom, [](const Point& x) { return x[2] * (1 - x[1] * x[1]); });
    HorizontalField v(dom, 2);
    for (std::size_t c = 0; c < dom->cells(); ++c) {
      v.at(c, 0) = v1[c];
      v.at(c, 1) = v2[c];
    }
    const auto gu = x_gradient(u);
    const auto div = x_divergence(v);
    const double defect = std::abs(inner(gu, v) + inner(u, div));
    const double scale = std::sqrt(integrate(u, 2.0)) * std::sqrt(inner(v, v));
    CHECK(defect / scale < 1e-11);
    CHECK(defect / scale < 10.0 * h);  // the spec-level bound, trivially met
  }
}

TEST_CASE("integrate: constants, powers, linearity in the weight") {
  auto sys = std::make_shared<VectorFieldSystem>(builtin_system("euclidean3"));
  const double h = 1.0 / 24;
  auto dom = discretize(make_box(make_point({0, 0, 0}), make_point({1, 1, 1})), h, sys);
  GridFunction one(dom);
  for (std::size_t c = 0; c < dom->cells(); ++c) one[c] = 1.0;
  CHECK(integrate(one, 1.0) == doctest::Approx(1.0).epsilon(3 * h));

  auto u = fill(dom, [](const Point& x) { return x[0]; }, false);
  CHECK(integrate(u, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(5 * h));

  GridFunction w(dom);
  for (std::size_t c = 0; c < dom->cells(); ++c) w[c] = 2.0;
  CHECK(integrate(u, 2.0, &w) == doctest::Approx(2.0 * integrate(u, 2.0)).epsilon(1e-12));

  GridFunction bad(dom);
  bad[dom->inside_cells()[0]] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(integrate(one, 1.0, &bad), NonFiniteWeight);
}

TEST_CASE("weak norms: indicators, homogeneity, Chebyshev bound") {
  auto sys = std::make_shared<VectorFieldSystem>(builtin_system("euclidean3"));
  auto dom = discretize(make_box(make_point({0, 0, 0}), make_point({1, 1, 1})), 1.0 / 16, sys);

  // u = c 1_E: norm = c |E|^{1/s}
  GridFunction u(dom);
  std::size_t count = 0;
  for (std::size_t c : dom->inside_cells()) {
    const Point x = dom->lattice().center(c);
    if (x[0] < 0.5) {
      u[c] = 3.0;
      ++count;
    }
  }
  const double measure = static_cast<double>(count) * dom->lattice().cell_volume();
  for (double s : {1.5, 2.0, 4.0}) {
    const auto wn = weak_norm(u, s);
    CHECK(wn.level_form == doctest::Approx(3.0 * std::pow(measure, 1.0 / s)).epsilon(1e-9));
    // indicator: the sup form agrees exactly
    CHECK(wn.sup_form == doctest::Approx(wn.level_form).epsilon(1e-9));
  }

  // Chebyshev: weak norm bounded by the strong norm, random fields
  Rng rng(3);
  GridFunction f(dom);
  for (std::size_t c : dom->inside_cells()) f[c] = rng.uniform(-2, 2) * rng.uniform(0, 1);
  for (double s : {1.5, 2.5}) {
    const double strong = std::pow(integrate(f, s), 1.0 / s);
    CHECK(weak_norm(f, s).level_form <= strong * (1 + 1e-12));
  }
}

TEST_CASE("weak norm of |x|^-gamma is stable under refinement") {
  auto sys = std::make_shared<VectorFieldSystem>(builtin_system("euclidean3"));
  const double gamma = 1.5, s = 3.0 / gamma;
  double prev = -1.0;
  for (double h : {1.0 / 16, 1.0 / 32}) {
    auto dom = discretize(make_euclidean_ball(make_point({0, 0, 0}), 1.0), h, sys);
    auto u = fill(dom, [&](const Point& x) {
      const double r = std::max(x.norm(), h / 2);
      return std::pow(r, -gamma);
    }, false);
    const double wn = weak_norm(u, s).level_form;
    CHECK(std::isfinite(wn));
    if (prev > 0.0) CHECK(std::abs(wn - prev) / prev < 0.10);
    prev = wn;
  }
}

TEST_CASE("truncated maximal operator: constants, monotonicity, sublinearity") {
  auto sys = std::make_shared<VectorFieldSystem>(builtin_system("euclidean3"));
  auto dom = discretize(make_box(make_point({-0.5, -0.5, -0.5}), make_point({0.5, 0.5, 0.5})),
                        1.0 / 10, sys);
  GridFunction cfun(dom);
  for (std::size_t c = 0; c < dom->cells(); ++c) cfun[c] = 2.0;
  auto m = truncated_maximal(cfun, 0.3);
  for (std::size_t c : dom->inside_cells()) CHECK(m[c] == doctest::Approx(2.0));

  Rng rng(9);
  GridFunction f(dom), g(dom);
  for (std::size_t c : dom->inside_cells()) {
    f[c] = rng.uniform(0, 1);
    g[c] = rng.uniform(0, 1);
  }
  auto m1 = truncated_maximal(f, 0.15);
  auto m2 = truncated_maximal(f, 0.3);
  GridFunction fg(dom);
  for (std::size_t c = 0; c < dom->cells(); ++c) fg[c] = f[c] + g[c];
  auto mfg = truncated_maximal(fg, 0.3);
  auto mg = truncated_maximal(g, 0.3);
  for (std::size_t c : dom->inside_cells()) {
    CHECK(m1[c] <= m2[c] * (1 + 1e-12));     // monotone in R
    CHECK(mfg[c] <= m2[c] + mg[c] + 1e-12);  // sublinear
  }
}

TEST_CASE("maximal of an indicator decays away from its support") {
  // direct averaging oracle: compare M_R(1_B(0,rho))(x) against
  // |B(0,rho)| / |B(x, d(x,0)-rho)| up to doubling slack
  auto sys = std::make_shared<VectorFieldSystem>(builtin_system("euclidean3"));
  auto dom = discretize(make_box(make_point({-1, -1, -1}), make_point({1, 1, 1})), 1.0 / 8, sys);
  const double rho = 0.25;
  auto ind = fill(dom, [&](const Point& x) { return x.norm() < rho ? 1.0 : 0.0; }, false);
  const Point far = make_point({0.75, 0, 0});
  MetricBallAverager avg(dom, far, 2.0);
  const double mval = avg.maximal(ind, 2.0);
  const double dist = far.norm();
  const double bound = std::pow(rho, 3) / std::pow(dist - rho, 3);
  CHECK(mval > 0.0);
  CHECK(mval <= 3.0 * bound);  // doubling slack factor
}
