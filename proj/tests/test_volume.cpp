#include <doctest.h>

#include <cmath>

#include "cch/rng.hpp"
#include "cch/volume.hpp"

using namespace cch;

TEST_CASE("Euclidean unit ball volume within 2% at 1e6 samples") {
  EuclideanPointOracle oracle(make_point({0, 0, 0}));
  const auto est = ball_volume(oracle, 1.0, 1000000, 99);
  const double target = 4.0 * M_PI / 3.0;
  CHECK(std::abs(est.estimate - target) / target < 0.02);
  CHECK(est.volume_lower == est.volume_upper);  // exact oracle, zero gap
}

TEST_CASE("fixed seed gives bit-identical estimates; chunking cannot change them") {
  EuclideanPointOracle oracle(make_point({0.2, -0.1, 0.5}));
  const auto a = ball_volume(oracle, 0.7, 200000, 1234);
  const auto b = ball_volume(oracle, 0.7, 200000, 1234);
  CHECK(a.estimate == b.estimate);
  CHECK(a.volume_lower == b.volume_lower);
  CHECK(a.mc_halfwidth == b.mc_halfwidth);
  const auto c = ball_volume(oracle, 0.7, 200000, 4321);
  CHECK(c.estimate != a.estimate);
}

TEST_CASE("fitted exponent recovers exact power laws") {
  std::vector<double> radii, vols;
  for (double r = 1.0 / 128; r <= 1.0 / 8; r *= 2) {
    radii.push_back(r);
    vols.push_back(3.7 * std::pow(r, 4));
  }
  CHECK(fitted_volume_exponent(radii, vols) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("Grushin ball volumes: exponent 4 at the origin, 3 away from the plane") {
  auto sys = std::make_shared<VectorFieldSystem>(builtin_system("grushin-paper-example"));
  auto basis = build_commutator_basis(
      *sys, {make_point({0, 0, 0}), make_point({1, 0, 0})}, 2);

  for (int which = 0; which < 2; ++which) {
    const Point x = which == 0 ? make_point({0, 0, 0}) : make_point({1, 0, 0});
    std::vector<double> radii, vols;
    for (double r : {1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8}) {
      ChordOracleOptions oopts;
      oopts.cells_per_radius = 20;
      ChordGraphOracle oracle(sys, x, r * 1.02, oopts);
      const auto est = ball_volume(oracle, r, 150000, 7);
      radii.push_back(r);
      vols.push_back(est.estimate);
    }
    const double expo = fitted_volume_exponent(radii, vols);
    if (which == 0) CHECK(std::abs(expo - 4.0) < 0.2);
    else CHECK(std::abs(expo - 3.0) < 0.2);
  }
}

TEST_CASE("comparability report: Euclidean ratios constant, rescaling exact") {
  auto sys = std::make_shared<VectorFieldSystem>(builtin_system("euclidean3"));
  auto basis = build_commutator_basis(*sys, {make_point({0, 0, 0})}, 1);
  ComparabilityOptions opts;
  opts.mc_samples = 100000;
  auto rep = comparability_report(basis, sys, {make_point({0, 0, 0}), make_point({0.5, 0.2, 0})},
                                  {0.125, 0.25, 0.5}, opts);
  CHECK(rep.rescaling_ok);
  // pure monomial: |B| / Lambda = (4 pi / 3) / 6 at every radius, up to MC noise
  const double target = (4.0 * M_PI / 3.0) / 6.0;
  CHECK(rep.ratio_min / target > 0.9);
  CHECK(rep.ratio_max / target < 1.1);
  // doubling constant for the exact Euclidean volume is 1
  CHECK(rep.doubling_c0 > 0.8);
  CHECK(rep.doubling_c0 < 1.2);
}
