#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "chords/body.hpp"
#include "chords/grid.hpp"
#include "chords/measure.hpp"
#include "chords/params.hpp"

namespace chords {

// Even discrete surface-area-measure prescription: find a polytope whose
// facet normals are the measure's directions and whose facet areas are its
// weights.
struct ClassicalProblem {
  DiscreteMeasure measure;
  bool even = true;
  bool rotationally_symmetric = false;
  GridPtr grid;  // optional: ring/orbit structure of the direction set

  // Throws if the closure condition sum f_i u_i = 0 fails (tolerance
  // 1e-10 * total mass) or the weighted directions degenerate to a
  // hemisphere (second-moment matrix loses rank).
  void validate() const;
};

struct SolveReport {
  Body body;
  int iterations = 0;
  double residual = 0.0;  // max relative facet-area error over active facets
  std::vector<double> objective_trace;
  double wall_time = 0.0;  // seconds
};

// Weighted density |x'|^alpha |x_n|^beta (eps^2 |x'|^2 + x_n^2)^{(gamma-beta)/2}
// on the unit sphere; even and rotationally symmetric by construction.
// Vanishes at the poles (alpha > 0) and on the equator (beta > 0).
double construction_density(const Eigen::VectorXd& x, const ProblemParams& params);

// f_i = density(u_i) * w_i, with antipodal pairs averaged so the problem is
// exactly even (closure then holds by cancellation).
ClassicalProblem discretize_density(const std::function<double(const Eigen::VectorXd&)>& density,
                                    const SphericalGrid& grid);

// Solve the discrete even problem. n = 2: direct construction (edges of
// length f_i rotated 90 degrees from u_i laid head-to-tail; exact up to
// rounding). n = 3: minimize sum f_i h_i over Vol([h]) = 1 by projected
// gradient on support numbers, then rescale so facet areas match.
// `init` optionally seeds the 3D iteration with support numbers.
SolveReport solve_classical_minkowski(const ClassicalProblem& problem,
                                      const Eigen::VectorXd* init = nullptr);

// Max relative facet-area error of `body` against the prescription, matching
// facets to measure atoms by normal direction. Directions without a facet
// count only if their weight exceeds 1e-9 * total mass.
double facet_area_residual(const Body& body, const DiscreteMeasure& measure);

}  // namespace chords
