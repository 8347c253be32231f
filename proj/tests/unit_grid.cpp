#include <cmath>

#include "chords/errors.hpp"
#include "chords/grid.hpp"
#include "doctest.h"

using chords::SphericalGrid;
using chords::SupportVector;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("circle grid invariants") {
  const SphericalGrid g = SphericalGrid::circle(16);
  g.validate();
  CHECK(g.dim == 2);
  CHECK(g.size() == 16);
  CHECK(g.weights.sum() == doctest::Approx(2.0 * kPi).epsilon(1e-14));

  // Antipodes are exact negations, not approximate ones.
  for (int i = 0; i < g.size(); ++i) {
    CHECK((g.directions.row(g.antipode[i]) + g.directions.row(i)).norm() == 0.0);
  }

  // Second moment of the uniform measure on S^1: sum w u u^T = pi * I.
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  for (int i = 0; i < g.size(); ++i) {
    m += g.weights(i) * g.directions.row(i).transpose() * g.directions.row(i);
  }
  CHECK((m - kPi * Eigen::Matrix2d::Identity()).norm() < 1e-12);

  CHECK_THROWS_AS(SphericalGrid::circle(6), chords::RepresentationError);
  CHECK_THROWS_AS(SphericalGrid::circle(0), chords::RepresentationError);
}

TEST_CASE("zonal grid on the two-sphere") {
  const SphericalGrid g = SphericalGrid::zonal_rings(3, 8);
  g.validate();
  CHECK(g.dim == 3);
  CHECK(g.zonal);
  CHECK(g.size() == 8 * 16);
  CHECK(g.weights.sum() == doctest::Approx(4.0 * kPi).epsilon(1e-13));
  CHECK(static_cast<int>(g.rings.size()) == 8);

  // Second moment: sum w u u^T = (4 pi / 3) * I.
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (int i = 0; i < g.size(); ++i) {
    m += g.weights(i) * g.directions.row(i).transpose() * g.directions.row(i);
  }
  CHECK((m - (4.0 * kPi / 3.0) * Eigen::Matrix3d::Identity()).norm() < 1e-12);

  // Quartic zonal moment: integral of u_z^4 over S^2 is 4 pi / 5.
  double m4 = 0.0;
  for (int i = 0; i < g.size(); ++i) m4 += g.weights(i) * std::pow(g.directions(i, 2), 4);
  CHECK(m4 == doctest::Approx(4.0 * kPi / 5.0).epsilon(1e-12));

  // Every direction knows its ring, and rings partition the grid.
  int counted = 0;
  for (const auto& ring : g.rings) counted += static_cast<int>(ring.size());
  CHECK(counted == g.size());
  for (int i = 0; i < g.size(); ++i) {
    bool found = false;
    for (int j : g.rings[g.ring_id[i]]) found = found || (j == i);
    CHECK(found);
  }

  CHECK_THROWS_AS(SphericalGrid::zonal_rings(3, 3), chords::RepresentationError);
  CHECK_THROWS_AS(SphericalGrid::zonal_rings(5, 8), chords::UnsupportedError);
}

TEST_CASE("zonal grid orbits pair each ring with its mirror ring") {
  const SphericalGrid g = SphericalGrid::zonal_rings(3, 6);
  REQUIRE(!g.orbits.empty());
  // Orbits are the unknowns of even zonal profiles: constant |u_z|, closed
  // under the antipodal map.
  CHECK(static_cast<int>(g.orbits.size()) == 3);
  int counted = 0;
  for (const auto& orbit : g.orbits) {
    counted += static_cast<int>(orbit.size());
    const double ref = std::abs(g.directions(orbit[0], 2));
    for (int j : orbit) {
      CHECK(std::abs(g.directions(j, 2)) == doctest::Approx(ref).epsilon(1e-12));
      CHECK(g.orbit_id[j] == g.orbit_id[orbit[0]]);
      CHECK(g.orbit_id[g.antipode[j]] == g.orbit_id[j]);
    }
  }
  CHECK(counted == g.size());
}

TEST_CASE("explicit grid round trip and validation") {
  const SphericalGrid base = SphericalGrid::circle(8);
  const SphericalGrid g = SphericalGrid::explicit_grid(base.directions, base.weights);
  g.validate();
  CHECK(g.size() == 8);
  CHECK_FALSE(g.zonal);

  // Missing antipodal partner is rejected.
  Eigen::MatrixXd bad = base.directions.topRows(7);
  Eigen::VectorXd w = base.weights.head(7);
  CHECK_THROWS_AS(SphericalGrid::explicit_grid(bad, w), chords::RepresentationError);
}

TEST_CASE("support vector validation") {
  auto grid = std::make_shared<const SphericalGrid>(SphericalGrid::circle(12));
  SupportVector h{grid, Eigen::VectorXd::Ones(12)};
  h.validate();
  h.values(3) = 0.0;
  CHECK_THROWS_AS(h.validate(), chords::RepresentationError);
  SupportVector mismatched{grid, Eigen::VectorXd::Ones(10)};
  CHECK_THROWS_AS(mismatched.validate(), chords::RepresentationError);
}
