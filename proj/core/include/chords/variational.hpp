#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "chords/body.hpp"
#include "chords/grid.hpp"
#include "chords/measure.hpp"
#include "chords/params.hpp"

namespace chords {

struct VariationalOptions {
  double tol = 1e-3;          // stationarity target
  int max_iterations = 2000;
  int gradient_refresh = 1;   // recompute facet measure every k iterations
  double h_min = 1e-4;        // solver box: iterates outside abort the run
  double h_max = 1e4;
  double initial_step = 0.25;
  Resolution res;
  std::optional<Eigen::VectorXd> init;  // optional start (defaults to the unit-chord ball)
};

struct VariationalState {
  SupportVector h;     // even, ring-constant, chord-normalized
  double objective = 0.0;  // sum f_i h_i^p at h
  Estimate chord;          // chord integral of [h], 1 within 1e-6 on success
  int iteration = 0;
  double stationarity = 0.0;
  std::vector<double> objective_trace;
  bool converged = false;
  bool hit_box = false;
};

// sum f_i h_i^p; weights f_i already include quadrature weights.
// Throws DomainError when any h_i <= 0 (p < 0 blows up).
double phi_p(const SupportVector& h, const DiscreteMeasure& f, double p);

// lambda * h with lambda = I_q([h])^{-1/(n+q-1)}, so the scaled Wulff body
// has unit chord integral (deterministic boundary evaluation).
SupportVector normalize_unit_chord(const SupportVector& h, double q, const Resolution& res = {});

// Maximize sum f_i h_i^p over { h > 0 : I_q([h]) = 1 } by projected ascent
// in the orbit coordinates of h's zonal grid (one unknown per ring pair):
// ascent direction = the objective gradient's Riesz representative in the
// diagonal curvature metric |p(p-1)| f h^{p-2}, projected onto the tangent
// of the chord constraint; Wulff re-extraction after each step, exact
// renormalization by homogeneity. The measure's directions must match the
// grid's.
VariationalState maximize(const DiscreteMeasure& f, const ProblemParams& params, GridPtr grid,
                          const VariationalOptions& opts = {});

struct RescaleResult {
  Body body;                      // the rescaled maximizer's Wulff body
  double lagrange_constant = 0.0; // C = 2q/((n+q-1) omega_n) * sum f_i h_i^p
  double rescale_factor = 0.0;    // C^{1/(n+q-p-1)}
  Estimate iq;                    // recomputed chord integral of the output
  double predicted_iq = 0.0;      // C^{(n+q-1)/(n+q-p-1)}
  double rel_err = 0.0;
};

// Scale the maximizer so the Lagrange multiplier is absorbed and the body
// solves the prescription with constant one.
RescaleResult euler_lagrange_rescale(const VariationalState& state, const DiscreteMeasure& f,
                                     const ProblemParams& params, const Resolution& res = {});

// How far `body` is from solving the discrete prescription: ratios
// r_i = (weighted facet measure)_i / f_i over atoms with mass, reported as
// max |r_i - median| / median. Support mismatch (facet without mass, or
// mass without facet) reports infinity.
double stationarity_residual(const Body& body, const DiscreteMeasure& f,
                             const ProblemParams& params, const Resolution& res = {});

}  // namespace chords
