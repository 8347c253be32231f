#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "chords/body.hpp"
#include "chords/grid.hpp"

namespace chords {

enum class Method { crofton_mc, boundary, radial_quadrature, riesz_mc, closed_form };

// Kebab-case names used in JSON/CSV records.
const char* method_name(Method m);
Method method_from_name(const std::string& s);

// One numeric result. Deterministic methods (closed-form, radial-quadrature,
// boundary) carry std_error = 0 and n_samples = quadrature node count.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  Method method = Method::closed_form;
};

// Atomic measure on the sphere: weight j sits at directions.row(j).
struct DiscreteMeasure {
  Eigen::MatrixXd directions;
  Eigen::VectorXd weights;
  double total() const { return weights.sum(); }
  void validate() const;  // unit rows, finite nonnegative weights
};

// Monte Carlo line sampling. Lines are drawn as (direction u, offset x in the
// disk of radius bounding_radius in u-perp centered at `center`). Fixing
// center and bounding_radius gives common random numbers across bodies: the
// same seed then produces the same lines regardless of the body.
struct LineSamplerConfig {
  std::uint64_t n_samples = 1ull << 16;
  std::uint64_t seed = 0xC0FFEE;
  int threads = 1;
  double bounding_radius = 0.0;           // 0: body circumradius
  std::optional<Eigen::VectorXd> center;  // empty: body centroid
  // Test knob: negate every sampled direction before use. The estimator
  // canonicalizes direction signs, so this must not change any output bit.
  bool antipodal_flip = false;
};

// Deterministic quadrature resolutions.
struct Resolution {
  int facet_nodes = 8;  // nodes per facet dimension (boundary quadratures)
  int arc_nodes = 16;   // Gauss nodes per vertex arc (2D radial integrals)
  int rings = 24;       // zonal rings for 3D spherical quadrature
};

// (1/n) * integral over the sphere of rho_{K,z}(u)^q. For boundary z the
// integral runs over {u : rho > 0} only. Methods: radial_quadrature
// (deterministic; exact arc decomposition in 2D, zonal grid in 3D) or
// riesz_mc ((q/n) Vol(K) E|x-z|^{q-n} over uniform x in K).
Estimate dual_quermass(const Body& body, const Eigen::VectorXd& z, double q, Method method,
                       const Resolution& res = {}, const LineSamplerConfig& mc = {});

// Monte Carlo chord integral: direction uniform on the sphere, offset uniform
// in the disk of radius R in u-perp; the line measure is
// omega_{n-1} R^{n-1} per direction, so value = omega_{n-1} R^{n-1} mean(X^q).
Estimate chord_integral_crofton(const Body& body, double q, const LineSamplerConfig& cfg);

// Deterministic chord integral of a polytope with the origin interior:
// sum of h_i F_{q,i} / (n+q-1) over facets.
Estimate chord_integral_boundary(const Body& body, double q, const Resolution& res = {});

// Facet weights F_{q,i} = (2q/omega_n) * integral over facet i of the
// (q-1)-th dual quermassintegral at boundary points; supported on facet
// normals. q = 1 reproduces the surface area measure exactly.
DiscreteMeasure chord_measure_polytope(const Body& body, double q, const Resolution& res = {});

// Same atoms with weights h_i^{1-p} F_{q,i}.
DiscreteMeasure lp_chord_measure(const Body& body, double p, double q, const Resolution& res = {});

// Facet weights of the Wulff shape [h] accumulated onto h's grid directions
// (zero where the direction's facet is inactive). The gradient of I_q in the
// support numbers, which the solvers consume.
Eigen::VectorXd chord_measure_on_grid(const SupportVector& h, double q, const Resolution& res = {});

// Closed-form upper bound for I_q of an axis-aligned ellipsoid with
// 0 < a_1 <= ... <= a_n <= 1. Non-integer q in (1, n+1) uses the two-branch
// constant directly; integer q in [1, n] is routed through the moment
// interpolation inequality with s = q + 1/2.
double ellipsoid_chord_bound(const EllipsoidData& E, double q);

struct InterpolationCheck {
  double lhs = 0.0;       // I_r estimate
  double rhs = 0.0;       // c(s,r) V^{1-t} I_s^{t}, t = (r-1)/(s-1)
  double sigma = 0.0;     // combined std error of lhs - rhs
  bool holds = false;     // lhs <= rhs + 3 sigma
};

// Checks I_r <= r s^{-(r-1)/(s-1)} V^{1-(r-1)/(s-1)} I_s^{(r-1)/(s-1)}
// with both chord integrals drawn from the same line sample (shared seed).
InterpolationCheck interpolation_bound_check(const Body& body, double r, double s,
                                             const LineSamplerConfig& cfg);

struct VariationCheck {
  double fd = 0.0;               // central difference of I_q over the Wulff family
  double measure_pairing = 0.0;  // sum of g_i F_{q,i}
  double rel_err = 0.0;
  bool facet_set_changed = false;  // active facets differ between h-step*g and h+step*g
};

// First-variation identity d/dt I_q([h+tg]) = sum g_i F_{q,i}. The finite
// difference uses common random numbers (one line set, fixed frame covering
// both perturbed bodies); the pairing side is deterministic.
VariationCheck first_variation_check(const SupportVector& h, const Eigen::VectorXd& g, double q,
                                     double step, const LineSamplerConfig& cfg,
                                     const Resolution& res = {});

}  // namespace chords
