#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "chords/body.hpp"
#include "chords/measure.hpp"
#include "chords/minkowski.hpp"
#include "chords/params.hpp"

namespace chords {

// Diagonal stretch maps tied to one epsilon. N = eps * Minv holds exactly
// (entries are written directly, not multiplied out).
struct EpsilonMaps {
  Eigen::MatrixXd M;     // diag(eps, ..., eps, 1)
  Eigen::MatrixXd Minv;  // diag(1/eps, ..., 1/eps, 1)
  Eigen::MatrixXd N;     // diag(1, ..., 1, eps)
  static EpsilonMaps build(int n, double eps);
};

// The stretched family member: eps^theta * Minv * K, with theta the
// stretch exponent of `params`. Input is the solved body of the classical
// problem; output support values obey the dilation-stretch formula.
Body build_stretched_solution(const Body& solved, const ProblemParams& params);

// Induced density at a unit direction x:
//   h(x_eps)^{1-p} |x'|^alpha |x_n|^beta |N x|^{-gamma-alpha-n-p}
//     * (1/n) * integral over the sphere of |N y|^{q-1-n} rho_{K,z}^{q-1}(y) dy
// with x_eps = Minv x / |Minv x| and z the boundary point of `solved`
// attaining the support value in direction x_eps.
double induced_density_eval(const Eigen::VectorXd& x, const Body& solved,
                            const ProblemParams& params, const Resolution& res = {});

struct TransformCheck {
  double lhs = 0.0;  // dual quermassintegral of the stretched body directly
  double rhs = 0.0;  // eps^{2-q} times the weighted radial integral
  double rel_err = 0.0;
};

// Substitution identity connecting the stretched body's dual
// quermassintegral at the mapped boundary point with the weighted radial
// integral on the original body.
TransformCheck quermass_transform_check(const Body& solved, const ProblemParams& params,
                                        const Eigen::VectorXd& x, const Resolution& res = {});

// Density mass binned onto a polytope's facet normals: atom j carries the
// integral of `density` over the spherical Voronoi arc around normal j
// (2D only). This is how an absolutely continuous prescription is compared
// against an atomic facet measure.
DiscreteMeasure density_on_facets(const Body& body,
                                  const std::function<double(const Eigen::VectorXd&)>& density);

// Density mass binned onto the images of `grid`'s cells under the normal map
// of the anisotropic scaling, u -> diag(eps,...,eps,1) u normalized. Atom j
// sits at the image of grid direction j and carries the integral of `density`
// over the image of cell j (change of variables, 2D only). A body built by
// stretching a solution on `grid` has exactly these facet normals, so this
// binning matches density mass to facets cell-by-cell even where the normal
// map compresses or spreads the fan.
DiscreteMeasure pushforward_density(const SphericalGrid& grid, double eps,
                                    const std::function<double(const Eigen::VectorXd&)>& density);

struct SweepRecord {
  double epsilon = 0.0;
  Estimate iq;                  // chord integral of the stretched body
  double decay_bound = 0.0;     // epsilon^{decay exponent} (times |log eps| at q = 2)
  double ratio = 0.0;           // iq.value / decay_bound
  double solver_residual = 0.0;
  bool ok = false;
  std::string error;  // nonempty when the entry failed
};

struct SweepResult {
  std::vector<SweepRecord> records;
  double fitted_slope = 0.0;  // log-log slope of iq against epsilon
};

// For each epsilon (descending): solve the classical problem for the
// weighted density, stretch, and evaluate the chord integral with the
// deterministic boundary method. Failures are recorded per entry and the
// sweep continues.
SweepResult epsilon_sweep(const ProblemParams& base, const std::vector<double>& eps_list,
                          int rings = 64, const Resolution& res = {});

}  // namespace chords
