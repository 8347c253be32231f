#include "chords/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chords/errors.hpp"
#include "chords/omega.hpp"

namespace chords {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

// Spread of the ratios r_k around their median, the scale-free measure of
// how far two atom vectors are from proportional.
double ratio_spread(const std::vector<double>& r) {
  const double med = median_of(r);
  if (!(std::abs(med) > 0.0)) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v - med) / std::abs(med));
  return worst;
}

}  // namespace

double phi_p(const SupportVector& h, const DiscreteMeasure& f, double p) {
  h.validate();
  if (f.weights.size() != h.values.size()) {
    throw DomainError("phi_p: measure and support vector sizes differ");
  }
  double acc = 0.0;
  for (int i = 0; i < h.values.size(); ++i) {
    if (!(h.values(i) > 0.0)) throw DomainError("phi_p: support values must be positive");
    acc += f.weights(i) * std::pow(h.values(i), p);
  }
  return acc;
}

SupportVector normalize_unit_chord(const SupportVector& h, double q, const Resolution& res) {
  h.validate();
  const WulffResult w = wulff_shape(h);
  const int n = h.grid->dim;
  const Estimate iq = chord_integral_boundary(w.body, q, res);
  if (!(iq.value > 0.0)) throw DegeneracyError("normalize_unit_chord: nonpositive chord integral");
  const double lambda = std::pow(iq.value, -1.0 / (n + q - 1.0));
  SupportVector out = h;
  out.values *= lambda;
  return out;
}

VariationalState maximize(const DiscreteMeasure& f, const ProblemParams& params, GridPtr grid,
                          const VariationalOptions& opts) {
  params.validate();
  if (!grid) throw ConfigError("maximize: grid required");
  grid->validate();
  if (grid->orbits.empty()) throw ConfigError("maximize: grid must carry ring orbits (zonal)");
  const int m = grid->size();
  if (f.weights.size() != m ||
      (f.directions - grid->directions).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("maximize: measure atoms must sit on the grid directions");
  }
  const double q = params.q, p = params.p;
  const int n = grid->dim;
  const double mass = f.weights.sum();
  if (!(mass > 0.0)) throw DomainError("maximize: measure has no mass");

  const int n_orbits = static_cast<int>(grid->orbits.size());
  auto collapse = [&](const Eigen::VectorXd& per_dir) {
    Eigen::VectorXd per_orbit = Eigen::VectorXd::Zero(n_orbits);
    for (int i = 0; i < m; ++i) per_orbit(grid->orbit_id[i]) += per_dir(i);
    return per_orbit;
  };
  auto expand_add = [&](Eigen::VectorXd& per_dir, const Eigen::VectorXd& per_orbit,
                        double scale) {
    for (int i = 0; i < m; ++i) per_dir(i) += scale * per_orbit(grid->orbit_id[i]);
  };

  // Start from the given profile or the unit-chord ball.
  SupportVector h{grid, opts.init ? *opts.init : Eigen::VectorXd::Ones(m)};
  h = normalize_unit_chord(h, q, opts.res);

  VariationalState state;
  state.h = h;
  state.objective = phi_p(h, f, p);
  state.objective_trace.push_back(state.objective);
  state.stationarity = std::numeric_limits<double>::infinity();

  Eigen::VectorXd fq = chord_measure_on_grid(h, q, opts.res);
  double step = opts.initial_step;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (it % std::max(1, opts.gradient_refresh) == 0) {
      fq = chord_measure_on_grid(h, q, opts.res);
    }
    Eigen::VectorXd gphi(m), curv(m);
    for (int i = 0; i < m; ++i) {
      const double hp2 = std::pow(h.values(i), p - 2.0);
      gphi(i) = p * f.weights(i) * hp2 * h.values(i);
      curv(i) = std::abs(p * (p - 1.0)) * f.weights(i) * hp2;
    }

    const Eigen::VectorXd G = collapse(gphi);
    const Eigen::VectorXd F = collapse(fq);
    Eigen::VectorXd M = collapse(curv);
    const double fn2 = F.squaredNorm();
    if (!(fn2 > 0.0)) throw DegeneracyError("maximize: facet measure vanished");
    // Orbits carrying no objective mass still need a positive metric entry.
    const double ridge = 1e-12 * M.maxCoeff();
    for (int o = 0; o < n_orbits; ++o) M(o) = std::max(M(o), ridge);

    // Stationarity: the per-orbit gradient/measure ratios must be constant.
    std::vector<double> ratios;
    for (int o = 0; o < n_orbits; ++o) {
      if (F(o) > 1e-14 * fn2) ratios.push_back(G(o) / F(o));
    }
    state.stationarity = ratio_spread(ratios);
    if (state.stationarity <= opts.tol) {
      state.converged = true;
      break;
    }

    // Ascent direction: Riesz representative of dPhi_p in the curvature
    // metric diag(M), projected onto the constraint tangent {d : d.F = 0}.
    // Positive-diagonal M keeps d.G >= 0, and the |p(p-1)| f h^{p-2} scaling
    // makes the step a damped Newton move per orbit, which tolerates measures
    // with a large dynamic range.
    double gf = 0.0, ff = 0.0;
    for (int o = 0; o < n_orbits; ++o) {
      gf += G(o) * F(o) / M(o);
      ff += F(o) * F(o) / M(o);
    }
    const double lambda = gf / ff;
    Eigen::VectorXd d(n_orbits);
    for (int o = 0; o < n_orbits; ++o) d(o) = (G(o) - lambda * F(o)) / M(o);
    if (!(d.cwiseAbs().maxCoeff() > 0.0)) {
      state.converged = true;
      break;
    }

    bool accepted = false;
    bool box_blocked = false;
    for (int back = 0; back < 30 && !accepted; ++back) {
      Eigen::VectorXd trial = h.values;
      expand_add(trial, d, step);
      if (trial.minCoeff() <= 0.0) {
        step *= 0.5;
        continue;
      }
      SupportVector th{grid, trial};
      WulffResult w = wulff_shape(th);
      // Vanished facet carrying mass: the step left the admissible cone.
      bool lost_mass = false;
      for (int i = 0; i < m; ++i) {
        if (!w.active[i] && f.weights(i) > 1e-12 * mass) lost_mass = true;
      }
      if (lost_mass) {
        step *= 0.5;
        continue;
      }
      th.values = w.induced;  // same body, smaller h: improves phi_p for p < 0
      th = normalize_unit_chord(th, q, opts.res);
      if (th.values.minCoeff() < opts.h_min || th.values.maxCoeff() > opts.h_max) {
        box_blocked = true;  // trust-region violation: retry with a shorter step
        step *= 0.5;
        continue;
      }
      const double tobj = phi_p(th, f, p);
      if (tobj > state.objective * (1.0 + 1e-14)) {
        h = th;
        state.objective = tobj;
        state.objective_trace.push_back(tobj);
        accepted = true;
        step = std::min(step * 1.3, 1.0);
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) {
      // Ascent blocked by the solver box: the a-priori bound regime failed.
      state.hit_box = box_blocked;
      break;
    }
  }

  state.h = h;
  state.iteration = it;
  const WulffResult w = wulff_shape(h);
  state.chord = chord_integral_boundary(w.body, q, opts.res);

  // Refresh the stationarity report with an up-to-date facet measure.
  fq = chord_measure_on_grid(h, q, opts.res);
  Eigen::VectorXd gphi(m);
  for (int i = 0; i < m; ++i) gphi(i) = p * f.weights(i) * std::pow(h.values(i), p - 1.0);
  const Eigen::VectorXd G = collapse(gphi);
  const Eigen::VectorXd F = collapse(fq);
  std::vector<double> ratios;
  for (int o = 0; o < n_orbits; ++o) {
    if (F(o) > 1e-14 * F.squaredNorm()) ratios.push_back(G(o) / F(o));
  }
  state.stationarity = ratio_spread(ratios);
  state.converged = state.converged || state.stationarity <= opts.tol;
  return state;
}

RescaleResult euler_lagrange_rescale(const VariationalState& state, const DiscreteMeasure& f,
                                     const ProblemParams& params, const Resolution& res) {
  const double q = params.q, p = params.p;
  const int n = state.h.grid->dim;
  const double phi = phi_p(state.h, f, p);
  const double C = 2.0 * q / ((n + q - 1.0) * unit_ball_volume(n)) * phi;
  if (!(C > 0.0)) throw DegeneracyError("euler_lagrange_rescale: nonpositive constant");

  RescaleResult out;
  out.lagrange_constant = C;
  out.rescale_factor = std::pow(C, 1.0 / (n + q - p - 1.0));
  SupportVector scaled = state.h;
  scaled.values *= out.rescale_factor;
  out.body = wulff_shape(scaled).body;
  out.iq = chord_integral_boundary(out.body, q, res);
  out.predicted_iq = std::pow(C, (n + q - 1.0) / (n + q - p - 1.0));
  out.rel_err = std::abs(out.iq.value - out.predicted_iq) / out.predicted_iq;
  return out;
}

double stationarity_residual(const Body& body, const DiscreteMeasure& f,
                             const ProblemParams& params, const Resolution& res) {
  const DiscreteMeasure G = lp_chord_measure(body, params.p, params.q, res);
  const double mass = f.weights.sum();

  // Match each facet atom to the best-aligned prescription atom.
  Eigen::VectorXd matched = Eigen::VectorXd::Zero(f.weights.size());
  for (int k = 0; k < G.weights.size(); ++k) {
    double best = -2.0;
    int arg = -1;
    for (int i = 0; i < f.directions.rows(); ++i) {
      const double d = G.directions.row(k).dot(f.directions.row(i));
      if (d > best) {
        best = d;
        arg = i;
      }
    }
    if (best < 1.0 - 1e-8) return std::numeric_limits<double>::infinity();
    matched(arg) += G.weights(k);
  }

  std::vector<double> ratios;
  for (int i = 0; i < matched.size(); ++i) {
    if (f.weights(i) > 1e-9 * mass) {
      ratios.push_back(matched(i) / f.weights(i));
    } else if (matched(i) > 1e-9 * mass) {
      return std::numeric_limits<double>::infinity();  // facet mass where f has none
    }
  }
  return ratio_spread(ratios);
}

}  // namespace chords
