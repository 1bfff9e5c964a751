#include <doctest.h>

#include <cmath>

#include "cch/commutator.hpp"
#include "cch/errors.hpp"
#include "cch/htype.hpp"
#include "cch/rng.hpp"
#include "cch/vector_field.hpp"

using namespace cch;

namespace {

Point rand_point(Rng& rng, int n, double amp = 2.0) {
  Point x(n);
  for (int k = 0; k < n; ++k) x[k] = rng.uniform(-amp, amp);
  return x;
}

// Numeric-differentiation bracket, independent of the symbolic path.
Eigen::VectorXd bracket_fd(const VectorField& X, const VectorField& Y, const Point& x,
                           double eps = 1e-6) {
  const int n = X.dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      Point xp = x, xm = x;
      xp[j] += eps;
      xm[j] -= eps;
      const double dYk = (Y.comps[k].eval(xp) - Y.comps[k].eval(xm)) / (2 * eps);
      const double dXk = (X.comps[k].eval(xp) - X.comps[k].eval(xm)) / (2 * eps);
      out[k] += X.comps[j].eval(x) * dYk - Y.comps[j].eval(x) * dXk;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("eval_frame on the built-in systems") {
  auto euc = builtin_system("euclidean3");
  Rng rng(7);
  for (int t = 0; t < 5; ++t) {
    const Point x = rand_point(rng, 3);
    CHECK((euc.eval_frame(x) - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
  }

  auto gr = builtin_system("grushin-paper-example");
  const Eigen::MatrixXd B1 = gr.eval_frame(make_point({1, 0, 0}));
  CHECK(B1.col(2)[0] == 0.0);
  CHECK(B1.col(2)[1] == 0.0);
  CHECK(B1.col(2)[2] == 1.0);
  const Eigen::MatrixXd B2 = gr.eval_frame(make_point({0, 5, 7}));
  CHECK(B2.col(2).norm() == 0.0);
}

TEST_CASE("lie brackets: constant frames commute, Grushin bracket is the missing direction") {
  auto euc = builtin_system("euclidean3");
  Rng rng(11);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(lie_bracket(euc, i, j, rand_point(rng, 3)).norm() == 0.0);

  auto gr = builtin_system("grushin-paper-example");
  for (int t = 0; t < 10; ++t) {
    const Point x = rand_point(rng, 3);
    const Eigen::VectorXd b = lie_bracket(gr, 0, 2, x);
    CHECK(b[0] == 0.0);
    CHECK(b[1] == 0.0);
    CHECK(b[2] == 1.0);
    // antisymmetry
    CHECK((lie_bracket(gr, 2, 0, x) + b).norm() == 0.0);
  }
}

TEST_CASE("H-type first-layer bracket matches the numeric-differentiation oracle") {
  HTypeGroup g(1, 1);
  auto sys = g.frame();
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    const Point x = rand_point(rng, 3);
    const Eigen::VectorXd sym = lie_bracket(sys, 0, 1, x);
    const Eigen::VectorXd num = bracket_fd(sys.field(0), sys.field(1), x);
    CHECK((sym - num).norm() < 1e-8);
    // constant multiple of the center direction, scale fixed by the group law
    CHECK(sym[0] == 0.0);
    CHECK(sym[1] == 0.0);
    CHECK(sym[2] == doctest::Approx(1.0));
  }
}

TEST_CASE("bracket antisymmetry and Jacobi are polynomial identities") {
  auto gr = builtin_system("grushin-paper-example");
  auto h1 = builtin_system("heisenberg1");
  Rng rng(17);
  for (const auto& sys : {gr, h1}) {
    std::vector<VectorField> fams = sys.fields();
    // extend with one bracket layer so the Jacobi check sees generated fields
    const int m = static_cast<int>(fams.size());
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        auto br = lie_bracket(fams[i], fams[j]);
        if (!br.is_zero()) fams.push_back(br);
      }
    const int l = static_cast<int>(fams.size());
    for (int a = 0; a < l; ++a)
      for (int b = 0; b < l; ++b) {
        // antisymmetry, exact
        auto ab = lie_bracket(fams[a], fams[b]);
        auto ba = lie_bracket(fams[b], fams[a]);
        for (int k = 0; k < sys.ambient_dim(); ++k) CHECK((ab.comps[k] + ba.comps[k]).is_zero());
      }
    for (int t = 0; t < 4; ++t) {
      const int a = static_cast<int>(rng.next_u64() % l);
      const int b = static_cast<int>(rng.next_u64() % l);
      const int c = static_cast<int>(rng.next_u64() % l);
      auto jac = lie_bracket(fams[a], lie_bracket(fams[b], fams[c]));
      auto j2 = lie_bracket(fams[b], lie_bracket(fams[c], fams[a]));
      auto j3 = lie_bracket(fams[c], lie_bracket(fams[a], fams[b]));
      for (int k = 0; k < sys.ambient_dim(); ++k) {
        auto sum = jac.comps[k] + j2.comps[k] + j3.comps[k];
        CHECK(sum.is_zero());
        // and pointwise at random points, tolerance 0
        for (int s = 0; s < 25; ++s) CHECK(sum.eval(rand_point(rng, sys.ambient_dim())) == 0.0);
      }
    }
  }
}

TEST_CASE("commutator basis: Euclidean frame needs no brackets") {
  auto euc = builtin_system("euclidean3");
  auto basis = build_commutator_basis(euc, {make_point({0, 0, 0})}, 1);
  CHECK(basis.size() == 3);
  CHECK(basis.degrees() == std::vector<int>{1, 1, 1});
  CHECK(basis.max_step() == 1);
}

TEST_CASE("commutator basis: the paper R^3 example generates in one extra step") {
  auto gr = builtin_system("grushin-paper-example");
  std::vector<Point> samples{make_point({0, 0, 0}), make_point({1, 0, 0}),
                             make_point({-0.5, 0.3, 0.2})};
  auto basis = build_commutator_basis(gr, samples, 2);
  CHECK(basis.size() == 4);
  CHECK(basis.degrees() == std::vector<int>{1, 1, 1, 2});
  // Y4 = [X1, X3]
  CHECK(basis.parents(3) == std::pair<int, int>{0, 2});
  for (const auto& x : samples) CHECK(basis.rank_at(x) == 3);
}

TEST_CASE("commutator basis: rank failure is reported with the offending sample") {
  auto gr = builtin_system("grushin-paper-example");
  // rank of {X1,X2,X3} at the origin is 2
  CHECK(matrix_rank(gr.eval_frame(make_point({0, 0, 0}))) == 2);
  CHECK_THROWS_AS(build_commutator_basis(gr, {make_point({0, 0, 0})}, 1), HoermanderFailure);
}

TEST_CASE("H-type group operations") {
  HTypeGroup g(1, 1);
  const Point e = g.identity();
  CHECK((g.inverse(e) - e).norm() == 0.0);
  CHECK(g.kaplan_gauge(e) == 0.0);
  CHECK(g.kaplan_gauge(make_point({1, 0, 0})) == doctest::Approx(1.0));
  CHECK(g.kaplan_gauge(make_point({0, 0, 1})) == doctest::Approx(2.0));  // (16)^{1/4}

  Rng rng(23);
  SUBCASE("group axioms and homogeneity") {
    for (int t = 0; t < 100; ++t) {
      const Point a = rand_point(rng, 3), b = rand_point(rng, 3), c = rand_point(rng, 3);
      // associativity
      CHECK((g.product(g.product(a, b), c) - g.product(a, g.product(b, c))).norm() < 1e-12);
      // inverse
      CHECK(g.product(a, g.inverse(a)).norm() < 1e-12);
    }
    for (int t = 0; t < 50; ++t) {
      const Point a = rand_point(rng, 3);
      const double lam = rng.uniform(0.1, 3.0);
      CHECK(std::abs(g.kaplan_gauge(g.dilate(lam, a)) - lam * g.kaplan_gauge(a)) < 1e-12);
    }
  }

  SUBCASE("dilations scale layers correctly") {
    const Point a = make_point({1.0, -2.0, 0.5});
    const Point d = g.dilate(3.0, a);
    CHECK(d[0] == 3.0);
    CHECK(d[1] == -6.0);
    CHECK(d[2] == 4.5);
  }

  SUBCASE("horizontal gradient of the gauge") {
    CHECK_THROWS_AS(g.gauge_hgrad_sq(e), Singularity);
    for (int t = 0; t < 30; ++t) {
      const Point a = rand_point(rng, 3);
      if (g.kaplan_gauge(a) < 1e-6) continue;
      // |XN|^2 = |x|^2 / N^2 for every H-type group with this normalization
      const double expect =
          (a[0] * a[0] + a[1] * a[1]) / (g.kaplan_gauge(a) * g.kaplan_gauge(a));
      CHECK(g.gauge_hgrad_sq(a) == doctest::Approx(expect).epsilon(1e-10));
    }
  }
}

TEST_CASE("H-type with quaternionic center (k=2, q=3)") {
  HTypeGroup g(2, 3);
  CHECK(g.dim() == 7);
  CHECK(g.homogeneous_dim() == 10);
  Rng rng(29);
  for (int t = 0; t < 20; ++t) {
    Point a = rand_point(rng, 7), b = rand_point(rng, 7), c = rand_point(rng, 7);
    CHECK((g.product(g.product(a, b), c) - g.product(a, g.product(b, c))).norm() < 1e-12);
    const double lam = rng.uniform(0.2, 2.0);
    CHECK(std::abs(g.kaplan_gauge(g.dilate(lam, a)) - lam * g.kaplan_gauge(a)) < 1e-12);
    if (g.kaplan_gauge(a) > 1e-3) {
      const double x2 = a.head(4).squaredNorm();
      CHECK(g.gauge_hgrad_sq(a) ==
            doctest::Approx(x2 / std::pow(g.kaplan_gauge(a), 2)).epsilon(1e-10));
    }
  }
  // the frame plus one bracket layer spans R^7
  auto basis = build_commutator_basis(g.frame(), {g.identity(), rand_point(rng, 7)}, 2);
  CHECK(basis.max_step() == 2);
  for (int i = 0; i < basis.size(); ++i)
    CHECK((basis.degree(i) == 1 || basis.degree(i) == 2));
}

TEST_CASE("system files parse and reject bad input") {
  const std::string txt =
      "# the paper example\n"
      "dim 3\n"
      "1, 0, 0\n"
      "0, 1, 0\n"
      "0, 0, x1\n";
  auto sys = parse_system(txt);
  CHECK(sys.ambient_dim() == 3);
  CHECK(sys.num_fields() == 3);
  const Point x = make_point({2, 0, 0});
  CHECK((sys.eval_frame(x) - builtin_system("grushin-paper-example").eval_frame(x)).norm() ==
        0.0);

  CHECK_THROWS_AS(parse_system("dim 3\n1, 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_system("1, 0, 0\n"), ConfigError);
  CHECK_THROWS_AS(builtin_system("no-such-system"), ConfigError);
}
