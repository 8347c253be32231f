#include <cmath>
#include <memory>

#include "chords/body.hpp"
#include "chords/errors.hpp"
#include "chords/measure.hpp"
#include "chords/omega.hpp"
#include "doctest.h"

using namespace chords;

namespace {

constexpr double kPi = 3.14159265358979323846;

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

Body regular_polygon(int sides, double apothem = 1.0) {
  Eigen::MatrixXd n(sides, 2);
  for (int k = 0; k < sides; ++k) {
    const double t = 2.0 * kPi * k / sides;
    n(k, 0) = std::cos(t);
    n(k, 1) = std::sin(t);
  }
  return Body::hpolytope(n, Eigen::VectorXd::Constant(sides, apothem));
}

}  // namespace

TEST_CASE("dual quermass of centered balls is closed form") {
  const Body b2 = Body::ball(1.5, vec2(0, 0));
  // (1/n) * integral of rho^q = (1/2) * 2 pi * R^q in the plane.
  const Estimate e = dual_quermass(b2, vec2(0, 0), 2.5, Method::radial_quadrature);
  CHECK(e.value == doctest::Approx(kPi * std::pow(1.5, 2.5)).epsilon(1e-10));
  CHECK(e.std_error == 0.0);

  const Body b3 = Body::ball(0.75, vec3(0, 0, 0));
  const Estimate e3 = dual_quermass(b3, vec3(0, 0, 0), 1.5, Method::radial_quadrature);
  CHECK(e3.value == doctest::Approx(4.0 * kPi / 3.0 * std::pow(0.75, 1.5)).epsilon(1e-9));
}

TEST_CASE("dual quermass at a planar boundary point") {
  // Chords of the unit disk from a boundary point: rho(u) = max(0, -2 <z, u>),
  // so (1/2) * integral rho = 2.
  const Body ball = Body::ball(1.0, vec2(0, 0));
  const Estimate e = dual_quermass(ball, vec2(1, 0), 1.0, Method::radial_quadrature);
  CHECK(e.value == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("dual quermass of a polygon: exact arcs vs riesz monte carlo") {
  const Body sq = unit_square();
  const Eigen::VectorXd z = vec2(0.3, -0.2);
  const double q = 2.5;
  const Estimate det = dual_quermass(sq, z, q, Method::radial_quadrature);
  LineSamplerConfig cfg;
  cfg.n_samples = 1 << 18;
  const Estimate mc = dual_quermass(sq, z, q, Method::riesz_mc, Resolution{}, cfg);
  CHECK(mc.std_error > 0.0);
  CHECK(std::abs(mc.value - det.value) < 4.0 * mc.std_error + 1e-9);

  // q = n recovers n * volume / n = volume-like normalization:
  // (1/n) int rho^n du = vol(K - z translated star) = vol(K) for convex K.
  const Estimate vq = dual_quermass(sq, z, 2.0, Method::radial_quadrature);
  CHECK(vq.value == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("crofton estimator matches closed form on balls") {
  LineSamplerConfig cfg;
  cfg.n_samples = 1 << 17;
  const Body b2 = Body::ball(1.0, vec2(0, 0));
  const Estimate e2 = chord_integral_crofton(b2, 2.5, cfg);
  CHECK(std::abs(e2.value - ball_chord_integral(2, 2.5)) < 4.0 * e2.std_error);

  const Body b3 = Body::ball(1.0, vec3(0, 0, 0));
  const Estimate e3 = chord_integral_crofton(b3, 2.5, cfg);
  CHECK(std::abs(e3.value - ball_chord_integral(3, 2.5)) < 4.0 * e3.std_error);

  // q = 1 integrates chord length to the volume.
  const Estimate v3 = chord_integral_crofton(b3, 1.0, cfg);
  CHECK(std::abs(v3.value - 4.0 * kPi / 3.0) < 4.0 * v3.std_error);
}

TEST_CASE("crofton q = 0 recovers the mean width / projection laws") {
  LineSamplerConfig cfg;
  cfg.n_samples = 1 << 17;
  // Measure of lines meeting K: mean over directions of the shadow measure.
  // n = 2: perimeter / pi; n = 3: surface / 4 (both times the direction mean).
  const Estimate e2 = chord_integral_crofton(unit_square(), 0.0, cfg);
  CHECK(std::abs(e2.value - 8.0 / kPi) < 4.0 * e2.std_error);
  const Estimate e3 = chord_integral_crofton(unit_cube(), 0.0, cfg);
  CHECK(std::abs(e3.value - 24.0 / 4.0) < 4.0 * e3.std_error);
}

TEST_CASE("crofton estimator is invariant under antipodal flips and threading") {
  const Body b = regular_polygon(10);
  LineSamplerConfig cfg;
  cfg.n_samples = 1 << 14;
  const Estimate base = chord_integral_crofton(b, 2.5, cfg);

  LineSamplerConfig flip = cfg;
  flip.antipodal_flip = true;
  const Estimate flipped = chord_integral_crofton(b, 2.5, flip);
  CHECK(base.value == flipped.value);
  CHECK(base.std_error == flipped.std_error);

  LineSamplerConfig threaded = cfg;
  threaded.threads = 4;
  const Estimate par = chord_integral_crofton(b, 2.5, threaded);
  CHECK(base.value == par.value);
  CHECK(base.std_error == par.std_error);
}

TEST_CASE("crofton error shrinks like one over sqrt of n") {
  const Body b = regular_polygon(7);
  LineSamplerConfig small;
  small.n_samples = 1 << 13;
  LineSamplerConfig big;
  big.n_samples = 1 << 15;
  const double s1 = chord_integral_crofton(b, 2.0, small).std_error;
  const double s2 = chord_integral_crofton(b, 2.0, big).std_error;
  CHECK(s1 / s2 > 1.5);
  CHECK(s1 / s2 < 2.7);
}

TEST_CASE("common random numbers make scaling exact") {
  // Same seed, same center, radius scaled with the body: the sampled lines
  // scale exactly, so the estimate obeys the t^{n+q-1} law to rounding.
  const double q = 2.5;
  const Body k1 = regular_polygon(6);
  Eigen::MatrixXd v2 = k1.poly().vertices * 2.0;
  const Body k2 = Body::vpolytope(v2);

  LineSamplerConfig c1;
  c1.n_samples = 1 << 14;
  c1.center = vec2(0, 0);
  c1.bounding_radius = 2.0;
  LineSamplerConfig c2 = c1;
  c2.bounding_radius = 4.0;

  const Estimate e1 = chord_integral_crofton(k1, q, c1);
  const Estimate e2 = chord_integral_crofton(k2, q, c2);
  CHECK(e2.value / e1.value == doctest::Approx(std::pow(2.0, 2.0 + q - 1.0)).epsilon(1e-10));
}

TEST_CASE("boundary chord integral: exact identities") {
  // q = 1 gives the volume exactly (cone decomposition).
  const Body sq = unit_square();
  CHECK(chord_integral_boundary(sq, 1.0).value == doctest::Approx(4.0).epsilon(1e-12));
  const Body dec = regular_polygon(10);
  CHECK(chord_integral_boundary(dec, 1.0).value ==
        doctest::Approx(dec.poly().volume).epsilon(1e-12));
  const Body cube = unit_cube();
  CHECK(chord_integral_boundary(cube, 1.0).value == doctest::Approx(8.0).epsilon(1e-10));
  CHECK(chord_integral_boundary(cube, 1.0).std_error == 0.0);
}

TEST_CASE("boundary chord integral matches the q = n + 1 volume identity") {
  // I_{n+1}(K) = (n+1) vol(K)^2 / omega_n.
  const Body dec = regular_polygon(10);
  const double v = dec.poly().volume;
  const Estimate e = chord_integral_boundary(dec, 3.0, Resolution{16, 24, 24});
  CHECK(e.value == doctest::Approx(3.0 * v * v / kPi).epsilon(2e-4));
}

TEST_CASE("boundary and crofton agree on a decagon at fractional q") {
  const Body dec = regular_polygon(10);
  const Estimate det = chord_integral_boundary(dec, 2.5, Resolution{16, 24, 24});
  LineSamplerConfig cfg;
  cfg.n_samples = 1 << 18;
  const Estimate mc = chord_integral_crofton(dec, 2.5, cfg);
  CHECK(std::abs(det.value - mc.value) < 4.0 * mc.std_error + 2e-3 * det.value);
}

TEST_CASE("chord measure at q = 1 is the surface area measure") {
  const DiscreteMeasure m = chord_measure_polytope(unit_square(), 1.0);
  m.validate();
  REQUIRE(m.weights.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(m.weights(i) == doctest::Approx(2.0).epsilon(1e-12));

  const DiscreteMeasure mc = chord_measure_polytope(unit_cube(), 1.0);
  REQUIRE(mc.weights.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(mc.weights(i) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("chord measure pairs with support numbers to the chord integral") {
  // sum h_i F_{q,i} = (n + q - 1) I_q for polytopes with interior origin.
  const Body dec = regular_polygon(10);
  const double q = 2.5;
  const DiscreteMeasure m = chord_measure_polytope(dec, q);
  double pairing = 0.0;
  for (int i = 0; i < m.weights.size(); ++i) {
    pairing += dec.poly().offsets(i) * m.weights(i);
  }
  const double iq = chord_integral_boundary(dec, q).value;
  CHECK(pairing == doctest::Approx((2.0 + q - 1.0) * iq).epsilon(1e-12));
}

TEST_CASE("lp chord measure reweights by h^{1-p}") {
  const Body dec = regular_polygon(10, 1.3);
  const double p = -1.0, q = 2.5;
  const DiscreteMeasure base = chord_measure_polytope(dec, q);
  const DiscreteMeasure lp = lp_chord_measure(dec, p, q);
  for (int i = 0; i < base.weights.size(); ++i) {
    CHECK(lp.weights(i) ==
          doctest::Approx(std::pow(1.3, 1.0 - p) * base.weights(i)).epsilon(1e-12));
  }
}

TEST_CASE("chord measure on a support grid matches the polytope measure") {
  auto grid = std::make_shared<const SphericalGrid>(SphericalGrid::circle(12));
  SupportVector h{grid, Eigen::VectorXd::Ones(12)};
  const Eigen::VectorXd f = chord_measure_on_grid(h, 1.0);
  REQUIRE(f.size() == 12);
  const double edge = 2.0 * std::tan(kPi / 12.0);
  for (int i = 0; i < 12; ++i) CHECK(f(i) == doctest::Approx(edge).epsilon(1e-12));
}

TEST_CASE("ellipsoid chord bound dominates the true integral") {
  LineSamplerConfig cfg;
  cfg.n_samples = 1 << 16;

  EllipsoidData flat;
  flat.semi_axes = vec2(0.6, 1.0);
  flat.rotation = Eigen::Matrix2d::Identity();
  flat.center = vec2(0, 0);
  const double bound = ellipsoid_chord_bound(flat, 2.5);
  const Body body = Body::ellipsoid(flat.semi_axes, flat.rotation, flat.center);
  const Estimate est = chord_integral_crofton(body, 2.5, cfg);
  CHECK(est.value - 4.0 * est.std_error < bound);

  // Unit ball: the bound must sit above the closed form in both dimensions.
  EllipsoidData ball2;
  ball2.semi_axes = vec2(1, 1);
  ball2.rotation = Eigen::Matrix2d::Identity();
  ball2.center = vec2(0, 0);
  CHECK(ellipsoid_chord_bound(ball2, 2.5) >= ball_chord_integral(2, 2.5));

  EllipsoidData ball3;
  ball3.semi_axes = vec3(1, 1, 1);
  ball3.rotation = Eigen::Matrix3d::Identity();
  ball3.center = vec3(0, 0, 0);
  CHECK(ellipsoid_chord_bound(ball3, 2.5) >= ball_chord_integral(3, 2.5));

  // q = 1 (routed through the interpolation fallback) reduces to the volume.
  CHECK(ellipsoid_chord_bound(flat, 1.0) == doctest::Approx(kPi * 0.6).epsilon(1e-12));
}

TEST_CASE("moment interpolation inequality holds on sampled bodies") {
  LineSamplerConfig cfg;
  cfg.n_samples = 1 << 16;
  const InterpolationCheck c1 = interpolation_bound_check(regular_polygon(5), 2.0, 3.0, cfg);
  CHECK(c1.holds);
  const InterpolationCheck c2 = interpolation_bound_check(unit_cube(), 2.0, 3.0, cfg);
  CHECK(c2.holds);
  CHECK(c1.lhs > 0.0);
  CHECK(c1.rhs > 0.0);
}

TEST_CASE("first variation of the chord integral pairs with the chord measure") {
  auto grid = std::make_shared<const SphericalGrid>(SphericalGrid::circle(8));
  SupportVector h{grid, Eigen::VectorXd::Ones(8)};
  Eigen::VectorXd g(8);
  g << 0.9, -0.4, 0.3, 0.7, -0.2, 0.5, -0.6, 0.1;

  LineSamplerConfig cfg;
  cfg.n_samples = 1 << 18;
  const VariationCheck vc = first_variation_check(h, g, 2.5, 1e-3, cfg);
  CHECK_FALSE(vc.facet_set_changed);
  CHECK(vc.measure_pairing != 0.0);
  CHECK(vc.rel_err < 0.05);
}

TEST_CASE("estimator rejects out-of-domain requests") {
  const Body sq = unit_square();
  CHECK_THROWS_AS(dual_quermass(sq, vec2(3, 0), 2.0, Method::radial_quadrature),
                  chords::DomainError);
  CHECK_THROWS_AS(chord_integral_boundary(Body::ball(1.0, vec2(0, 0)), 2.0), chords::Error);
  // Origin outside the body: the boundary formula requires interior origin.
  Eigen::MatrixXd v(3, 2);
  v << 1, 1, 2, 1, 1, 2;
  CHECK_THROWS_AS(chord_integral_boundary(Body::vpolytope(v), 2.0), chords::DomainError);
}

TEST_CASE("method names round trip") {
  for (Method m : {Method::crofton_mc, Method::boundary, Method::radial_quadrature,
                   Method::riesz_mc, Method::closed_form}) {
    CHECK(method_from_name(method_name(m)) == m);
  }
  CHECK_THROWS_AS(method_from_name("bogus"), chords::ConfigError);
}
