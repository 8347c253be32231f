#include <cmath>

#include "chords/body.hpp"
#include "chords/errors.hpp"
#include "chords/grid.hpp"
#include "doctest.h"

using namespace chords;

namespace {

constexpr double kPi = 3.14159265358979323846;

Body unit_square() {
  Eigen::MatrixXd n(4, 2);
  n << 1, 0, 0, 1, -1, 0, 0, -1;
  return Body::hpolytope(n, Eigen::VectorXd::Ones(4));
}

Body unit_cube() {
  Eigen::MatrixXd n(6, 3);
  n << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
  return Body::hpolytope(n, Eigen::VectorXd::Ones(6));
}

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

Eigen::VectorXd vec3(double x, double y, double z) {
  Eigen::VectorXd v(3);
  v << x, y, z;
  return v;
}

}  // namespace

TEST_CASE("square from halfspaces: metrics and ordering") {
  const Body b = unit_square();
  const PolytopeData& p = b.poly();
  CHECK(p.volume == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(p.centroid.norm() < 1e-14);
  CHECK(p.vertices.rows() == 4);
  CHECK(p.normals.rows() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(p.facet_areas(k) == doctest::Approx(2.0).epsilon(1e-14));
    // Edge k runs between consecutive vertices.
    REQUIRE(p.facet_vertices[k].size() == 2);
    const Eigen::Vector2d a = p.vertices.row(p.facet_vertices[k][0]);
    const Eigen::Vector2d c = p.vertices.row(p.facet_vertices[k][1]);
    CHECK((a - c).norm() == doctest::Approx(2.0).epsilon(1e-12));
    // Both endpoints lie on the facet plane.
    CHECK(p.normals.row(k).dot(a) == doctest::Approx(p.offsets(k)).epsilon(1e-12));
    CHECK(p.normals.row(k).dot(c) == doctest::Approx(p.offsets(k)).epsilon(1e-12));
  }
}

TEST_CASE("redundant halfspaces are pruned") {
  Eigen::MatrixXd n(5, 2);
  n << 1, 0, 0, 1, -1, 0, 0, -1, std::sqrt(0.5), std::sqrt(0.5);
  Eigen::VectorXd h(5);
  h << 1, 1, 1, 1, 5.0;  // the diagonal constraint is slack everywhere
  const Body b = Body::hpolytope(n, h);
  CHECK(b.poly().normals.rows() == 4);
  CHECK(b.poly().volume == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("vertices factory deduplicates and hulls") {
  Eigen::MatrixXd v(6, 2);
  v << 1, 1, -1, 1, -1, -1, 1, -1, 0, 0, 1, 1;  // interior point + duplicate
  const Body b = Body::vpolytope(v);
  CHECK(b.poly().vertices.rows() == 4);
  CHECK(b.poly().volume == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("cube from halfspaces") {
  const Body b = unit_cube();
  const PolytopeData& p = b.poly();
  CHECK(p.volume == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(p.centroid.norm() < 1e-13);
  CHECK(p.vertices.rows() == 8);
  CHECK(p.normals.rows() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(p.facet_areas(k) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(p.facet_vertices[k].size() == 4);  // quad loops survive triangulated hulls
  }
}

TEST_CASE("octahedron from vertices") {
  Eigen::MatrixXd v(6, 3);
  v << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
  const Body b = Body::vpolytope(v);
  CHECK(b.poly().volume == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  CHECK(b.poly().normals.rows() == 8);
  const double want = std::sqrt(3.0) / 2.0;  // area of each unit-edge-sqrt(2) triangle
  for (int k = 0; k < 8; ++k) {
    CHECK(b.poly().facet_areas(k) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("support function oracles") {
  const Body sq = unit_square();
  CHECK(support_eval(sq, vec2(1, 0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(support_eval(sq, vec2(std::sqrt(0.5), std::sqrt(0.5))) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  const Body ball = Body::ball(2.0, vec2(1, 0));
  CHECK(support_eval(ball, vec2(1, 0)) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(support_eval(ball, vec2(0, 1)) == doctest::Approx(2.0).epsilon(1e-14));

  Eigen::VectorXd axes = vec2(1, 2);
  const Body ell = Body::ellipsoid(axes, Eigen::Matrix2d::Identity(), vec2(0, 0));
  // h_E(u)^2 = sum (a_i u_i)^2 for an axis-aligned ellipsoid.
  CHECK(support_eval(ell, vec2(0.6, 0.8)) ==
        doctest::Approx(std::sqrt(0.36 + 4 * 0.64)).epsilon(1e-13));

  // support_point attains the support value.
  const Eigen::VectorXd u = vec2(0.6, 0.8);
  CHECK(support_point(sq, u).dot(u) == doctest::Approx(support_eval(sq, u)).epsilon(1e-13));
  CHECK(support_point(ell, u).dot(u) == doctest::Approx(support_eval(ell, u)).epsilon(1e-13));
}

TEST_CASE("radial and xray oracles") {
  const Body sq = unit_square();
  CHECK(radial_eval(sq, vec2(0, 0), vec2(1, 0)) == doctest::Approx(1.0).epsilon(1e-13));
  const double d = std::sqrt(0.5);
  CHECK(radial_eval(sq, vec2(0, 0), vec2(d, d)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(radial_eval(sq, vec2(0.5, 0), vec2(1, 0)) == doctest::Approx(0.5).epsilon(1e-13));

  // Full-line length through the square.
  CHECK(xray(sq, vec2(0.5, 0), vec2(1, 0)) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(xray(sq, vec2(0, 0.75), vec2(1, 0)) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(xray(sq, vec2(0, 1.5), vec2(1, 0)) == 0.0);  // line misses

  const Body ball = Body::ball(1.0, vec2(0, 0));
  CHECK(xray(ball, vec2(0, 0.6), vec2(1, 0)) == doctest::Approx(1.6).epsilon(1e-13));
  CHECK(radial_eval(ball, vec2(0.5, 0), vec2(1, 0)) == doctest::Approx(0.5).epsilon(1e-13));

  Eigen::VectorXd axes = vec3(1, 1, 2);
  const Body ell = Body::ellipsoid(axes, Eigen::Matrix3d::Identity(), vec3(0, 0, 0));
  CHECK(xray(ell, vec3(0, 0, 1), vec3(1, 0, 0)) ==
        doctest::Approx(2.0 * std::sqrt(0.75)).epsilon(1e-13));

  // Chord through an off-center point of the cube along a diagonal direction.
  const Body cube = unit_cube();
  const double s = 1.0 / std::sqrt(3.0);
  CHECK(xray(cube, vec3(0, 0, 0), vec3(s, s, s)) ==
        doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("containment and circumradius") {
  const Body sq = unit_square();
  CHECK(contains(sq, vec2(0.999, -0.5)));
  CHECK_FALSE(contains(sq, vec2(1.001, 0)));
  CHECK(circumradius(sq) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  const Body ball = Body::ball(3.0, vec2(1, 1));
  CHECK(circumradius(ball) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("wulff shape of a constant support vector is the polygon of the grid") {
  auto grid = std::make_shared<const SphericalGrid>(SphericalGrid::circle(8));
  SupportVector h{grid, Eigen::VectorXd::Ones(8)};
  const WulffResult w = wulff_shape(h);
  const PolytopeData& p = w.body.poly();
  CHECK(p.normals.rows() == 8);
  // Regular octagon with apothem 1: area 8 tan(pi/8).
  CHECK(p.volume == doctest::Approx(8.0 * std::tan(kPi / 8.0)).epsilon(1e-12));
  for (int i = 0; i < 8; ++i) {
    CHECK(w.active[i] == 1);
    CHECK(w.induced(i) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("wulff shape drops dominated directions") {
  auto grid = std::make_shared<const SphericalGrid>(SphericalGrid::circle(8));
  Eigen::VectorXd vals = Eigen::VectorXd::Ones(8);
  // Raising one support value far enough makes its facet vanish.
  vals(0) = 3.0;
  SupportVector h{grid, vals};
  const WulffResult w = wulff_shape(h);
  int active = 0;
  for (char a : w.active) active += a;
  CHECK(active == 7);
  // Induced support of the dropped direction comes from the survivors.
  for (int i = 0; i < 8; ++i) {
    if (!w.active[i]) {
      CHECK(w.induced(i) < vals(i));
      CHECK(w.induced(i) ==
            doctest::Approx(support_eval(w.body, grid->directions.row(i))).epsilon(1e-12));
    }
  }
}

TEST_CASE("linear image scales volume by the determinant") {
  Eigen::Matrix2d M;
  M << 2, 1, 0, 1.5;
  const Body sq = unit_square();
  const Body img = linear_image(sq, M);
  CHECK(img.poly().volume == doctest::Approx(4.0 * M.determinant()).epsilon(1e-12));

  // H-representation maps consistently: h_{MK}(u) = h_K(M^T u).
  const Eigen::VectorXd u = vec2(0.6, 0.8);
  CHECK(support_eval(img, u) == doctest::Approx(support_eval(sq, M.transpose() * u)).epsilon(1e-12));

  const Body ball = Body::ball(1.0, vec2(0, 0));
  const Body ell = linear_image(ball, M);
  REQUIRE(ell.kind() == Body::Kind::ellipsoid);
  CHECK(support_eval(ell, u) == doctest::Approx((M.transpose() * u).norm()).epsilon(1e-12));

  Eigen::Matrix3d S = Eigen::Vector3d(0.5, 2.0, 1.0).asDiagonal();
  const Body cube = unit_cube();
  CHECK(linear_image(cube, S).poly().volume == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("john ellipsoid of a stretched diamond") {
  Eigen::MatrixXd v(4, 2);
  v << 2, 0, -2, 0, 0, 1, 0, -1;
  const Body diamond = Body::vpolytope(v);
  const JohnDecomposition jd = john_ellipsoid(diamond);

  // MVEE of { (+-2, 0), (0, +-1) } is the axis-aligned ellipse with semi-axes (2, 1).
  CHECK(jd.ellipsoid.semi_axes(0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(jd.ellipsoid.semi_axes(1) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(jd.shrink_factor == doctest::Approx(0.5).epsilon(1e-14));

  // Containment certificate: every vertex inside E, shrunken E inside K.
  const Body E = Body::ellipsoid(jd.ellipsoid.semi_axes, jd.ellipsoid.rotation,
                                 jd.ellipsoid.center);
  for (int i = 0; i < v.rows(); ++i) CHECK(contains(E, v.row(i).transpose()));
  for (int k = 0; k < 64; ++k) {
    const double t = 2.0 * kPi * (k + 0.5) / 64.0;
    const Eigen::VectorXd u = vec2(std::cos(t), std::sin(t));
    CHECK(jd.shrink_factor * support_eval(E, u) <= support_eval(diamond, u) + 1e-10);
  }

  CHECK(jd.rotationally_symmetric);
  CHECK(jd.a == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(jd.r == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("john ellipsoid of a symmetric 3d box") {
  Eigen::MatrixXd n(6, 3);
  n << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
  Eigen::VectorXd h(6);
  h << 1, 1, 1, 1, 0.25, 0.25;
  const Body box = Body::hpolytope(n, h);
  const JohnDecomposition jd = john_ellipsoid(box);
  // MVEE of a box is the ellipsoid through its vertices: semi-axes sqrt(3) * (1, 1, 1/4).
  CHECK(jd.ellipsoid.semi_axes(2) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-3));
  CHECK(jd.ellipsoid.semi_axes(0) == doctest::Approx(std::sqrt(3.0) * 0.25).epsilon(1e-3));
  CHECK(jd.rotationally_symmetric);
  CHECK(jd.a == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("john ellipsoid rejects asymmetric bodies") {
  Eigen::MatrixXd v(3, 2);
  v << 2, 0, -1, 1, -1, -1;
  CHECK_THROWS_AS(john_ellipsoid(Body::vpolytope(v)), chords::DomainError);
}

TEST_CASE("degenerate inputs are rejected") {
  // Flat vertex set.
  Eigen::MatrixXd flat(3, 2);
  flat << 0, 0, 1, 0, 2, 0;
  CHECK_THROWS_AS(Body::vpolytope(flat), chords::Error);

  // Unbounded halfspace intersection.
  Eigen::MatrixXd n(2, 2);
  n << 1, 0, 0, 1;
  CHECK_THROWS_AS(Body::hpolytope(n, Eigen::VectorXd::Ones(2)), chords::Error);

  // Non-unit normals.
  Eigen::MatrixXd n2(4, 2);
  n2 << 2, 0, 0, 1, -1, 0, 0, -1;
  CHECK_THROWS_AS(Body::hpolytope(n2, Eigen::VectorXd::Ones(4)), chords::RepresentationError);

  // Descending ellipsoid axes.
  Eigen::VectorXd axes = vec2(2, 1);
  CHECK_THROWS_AS(Body::ellipsoid(axes, Eigen::Matrix2d::Identity(), vec2(0, 0)),
                  chords::RepresentationError);
}

TEST_CASE("volume_and_facet_data agrees with stored polytope metrics") {
  const Body b = unit_cube();
  const BodyMetrics m = volume_and_facet_data(b);
  CHECK(m.volume == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(m.facet_normals.rows() == 6);
  CHECK((m.facet_areas - b.poly().facet_areas).norm() < 1e-12);

  const BodyMetrics mb = volume_and_facet_data(Body::ball(2.0, vec3(0, 0, 0)));
  CHECK(mb.volume == doctest::Approx(8.0 * 4.0 * kPi / 3.0).epsilon(1e-13));
  CHECK(mb.facet_normals.rows() == 0);
}
