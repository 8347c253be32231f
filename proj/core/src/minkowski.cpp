#include "chords/minkowski.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "chords/constants.hpp"
#include "chords/errors.hpp"

namespace chords {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Map each facet normal of `body` to the index of the best-aligned measure
// direction; -1 when nothing aligns to 1e-8.
std::vector<int> match_facets(const Body& body, const Eigen::MatrixXd& dirs) {
  const Eigen::MatrixXd& normals = body.poly().normals;
  std::vector<int> out(normals.rows(), -1);
  for (int k = 0; k < normals.rows(); ++k) {
    double best = -2.0;
    int arg = -1;
    for (int i = 0; i < dirs.rows(); ++i) {
      const double d = normals.row(k).dot(dirs.row(i));
      if (d > best) {
        best = d;
        arg = i;
      }
    }
    if (best > 1.0 - 1e-8) out[k] = arg;
  }
  return out;
}

SolveReport solve_planar(const ClassicalProblem& problem, Clock::time_point t0) {
  const Eigen::MatrixXd& u = problem.measure.directions;
  const Eigen::VectorXd& f = problem.measure.weights;
  const int m = static_cast<int>(u.rows());

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::atan2(u(a, 1), u(a, 0)) < std::atan2(u(b, 1), u(b, 0));
  });

  // Lay the edges head-to-tail: edge k has length f_k and direction u_k
  // rotated 90 degrees counterclockwise, so its outward normal is u_k.
  // Closure makes the chain end where it started.
  Eigen::MatrixXd vertices(m, 2);
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();
  for (int k = 0; k < m; ++k) {
    vertices.row(k) = pos;
    const int i = order[k];
    pos += f(i) * Eigen::Vector2d(-u(i, 1), u(i, 0));
  }

  Eigen::MatrixXd normals(m, 2);
  Eigen::VectorXd offsets(m);
  for (int k = 0; k < m; ++k) {
    normals.row(k) = u.row(order[k]);
    offsets(k) = normals.row(k).dot(vertices.row(k));
  }
  // Recenter so the even problem's solution is origin-symmetric.
  Body body = Body::hpolytope(normals, offsets);
  const Eigen::VectorXd c = body.poly().centroid;
  for (int k = 0; k < m; ++k) offsets(k) -= normals.row(k).dot(c);
  body = Body::hpolytope(normals, offsets);

  SolveReport report;
  report.body = body;
  report.iterations = 0;
  report.residual = facet_area_residual(body, problem.measure);
  report.wall_time = seconds_since(t0);
  return report;
}

SolveReport solve_spatial(const ClassicalProblem& problem, const Eigen::VectorXd* init,
                          Clock::time_point t0) {
  const Eigen::MatrixXd& u = problem.measure.directions;
  const Eigen::VectorXd& f = problem.measure.weights;
  const int m = static_cast<int>(u.rows());
  const double mass = f.sum();

  auto grid = std::make_shared<const SphericalGrid>(
      SphericalGrid::explicit_grid(u, Eigen::VectorXd::Constant(m, 4.0 * M_PI / m)));

  Eigen::VectorXd h = (init && init->size() == m) ? *init : Eigen::VectorXd::Ones(m);

  // Areas of [h] accumulated onto the direction set (0 for vanished facets).
  auto grid_areas = [&](const WulffResult& w) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
    const std::vector<int> map = match_facets(w.body, u);
    const Eigen::VectorXd& fa = w.body.poly().facet_areas;
    for (int k = 0; k < fa.size(); ++k) {
      if (map[k] >= 0) a(map[k]) += fa(k);
    }
    return a;
  };
  auto unit_volume = [&](Eigen::VectorXd& hh, WulffResult& w) {
    w = wulff_shape(SupportVector{grid, hh});
    const double t = std::pow(w.body.poly().volume, -1.0 / 3.0);
    hh *= t;
    w = wulff_shape(SupportVector{grid, hh});
  };

  SolveReport report;
  WulffResult w;
  unit_volume(h, w);
  double objective = f.dot(h);  // minimized subject to Vol([h]) = 1
  report.objective_trace.push_back(objective);

  double step = 0.1;
  const int cap = 10000;
  int it = 0;
  for (; it < cap; ++it) {
    const Eigen::VectorXd a = grid_areas(w);
    // Stationarity: areas proportional to weights. Rescale to match and
    // measure the residual on the rescaled body.
    const double c = a.dot(f) / f.squaredNorm();
    double residual = 0.0;
    for (int i = 0; i < m; ++i) {
      if (f(i) > 1e-9 * mass) {
        residual = std::max(residual, std::abs(a(i) / c - f(i)) / f(i));
      } else if (a(i) > 1e-9 * c * mass) {
        residual = std::numeric_limits<double>::infinity();
      }
    }
    if (residual <= 1e-6) break;

    // Project the objective gradient onto the volume-preserving tangent.
    Eigen::VectorXd d = f - (f.dot(a) / a.squaredNorm()) * a;
    if (problem.grid && problem.rotationally_symmetric && !problem.grid->orbits.empty()) {
      for (const auto& orbit : problem.grid->orbits) {
        double s = 0.0;
        for (int i : orbit) s += d(i);
        s /= static_cast<double>(orbit.size());
        for (int i : orbit) d(i) = s;
      }
    }
    const double dn = d.norm();
    if (dn < 1e-15 * f.norm()) break;
    d /= dn;

    bool accepted = false;
    for (int back = 0; back < 40 && !accepted; ++back) {
      Eigen::VectorXd trial = h - step * d;
      if (trial.minCoeff() < 1e-6) {
        step *= 0.5;
        continue;
      }
      WulffResult tw;
      unit_volume(trial, tw);
      trial = tw.induced;  // same body, pointwise-smaller support numbers
      const double tobj = f.dot(trial);
      if (tobj < objective - 1e-14 * std::abs(objective)) {
        h = trial;
        w = tw;
        objective = tobj;
        report.objective_trace.push_back(objective);
        accepted = true;
        step *= 1.3;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) break;
  }

  // Scale so facet areas match the weights: areas are (n-1)-homogeneous.
  const Eigen::VectorXd a = grid_areas(w);
  const double c = a.dot(f) / f.squaredNorm();
  const double t = 1.0 / std::sqrt(c);
  Eigen::VectorXd hf = t * h;
  WulffResult wf = wulff_shape(SupportVector{grid, hf});

  report.body = wf.body;
  report.iterations = it;
  report.residual = facet_area_residual(wf.body, problem.measure);
  report.wall_time = seconds_since(t0);
  return report;
}

}  // namespace

void ClassicalProblem::validate() const {
  measure.validate();
  const Eigen::MatrixXd& u = measure.directions;
  const Eigen::VectorXd& f = measure.weights;
  const double mass = f.sum();
  if (!(mass > 0.0)) throw DomainError("classical problem: measure has no mass");

  const Eigen::VectorXd closure = u.transpose() * f;
  if (closure.norm() > 1e-10 * mass) {
    throw DomainError("classical problem: weighted directions do not close up (sum f_i u_i != 0)");
  }

  // Hemisphere degeneracy: the second-moment matrix must have full rank.
  const int n = static_cast<int>(u.cols());
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < u.rows(); ++i) {
    second += f(i) * u.row(i).transpose() * u.row(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(second);
  if (es.eigenvalues()(0) < 1e-10 * mass) {
    throw DomainError("classical problem: directions concentrate on a great subsphere");
  }

  if (even) {
    for (int i = 0; i < u.rows(); ++i) {
      bool matched = false;
      for (int j = 0; j < u.rows() && !matched; ++j) {
        if ((u.row(i) + u.row(j)).norm() < tol::kAntipodal &&
            std::abs(f(i) - f(j)) <= 1e-12 * mass) {
          matched = true;
        }
      }
      if (!matched) throw DomainError("classical problem: measure is not even");
    }
  }
}

double construction_density(const Eigen::VectorXd& x, const ProblemParams& params) {
  const int n = params.n;
  if (x.size() != n) throw DomainError("construction_density: dimension mismatch");
  const double xn = std::abs(x(n - 1));
  const double rp = x.head(n - 1).norm();
  const double stretched = std::sqrt(params.epsilon * params.epsilon * rp * rp + xn * xn);
  return std::pow(rp, params.alpha) * std::pow(xn, params.beta) *
         std::pow(stretched, params.gamma - params.beta);
}

ClassicalProblem discretize_density(const std::function<double(const Eigen::VectorXd&)>& density,
                                    const SphericalGrid& grid) {
  grid.validate();
  const int m = grid.size();
  Eigen::VectorXd f(m);
  for (int i = 0; i < m; ++i) {
    const double v = density(grid.directions.row(i)) * grid.weights(i);
    if (!std::isfinite(v)) throw DomainError("discretize_density: density not finite at a node");
    f(i) = v;
  }
  for (int i = 0; i < m; ++i) {
    const int j = grid.antipode[i];
    if (j > i) {
      const double avg = 0.5 * (f(i) + f(j));
      f(i) = avg;
      f(j) = avg;
    }
  }

  ClassicalProblem out;
  out.measure.directions = grid.directions;
  out.measure.weights = f;
  out.even = true;
  out.rotationally_symmetric = grid.zonal;
  out.grid = std::make_shared<const SphericalGrid>(grid);
  return out;
}

SolveReport solve_classical_minkowski(const ClassicalProblem& problem,
                                      const Eigen::VectorXd* init) {
  const auto t0 = Clock::now();
  problem.validate();
  const int n = static_cast<int>(problem.measure.directions.cols());
  if (n == 2) return solve_planar(problem, t0);
  if (n == 3) return solve_spatial(problem, init, t0);
  throw UnsupportedError("classical solver covers dimensions 2 and 3");
}

double facet_area_residual(const Body& body, const DiscreteMeasure& measure) {
  const std::vector<int> map = match_facets(body, measure.directions);
  const Eigen::VectorXd& areas = body.poly().facet_areas;
  const double mass = measure.weights.sum();
  Eigen::VectorXd matched = Eigen::VectorXd::Zero(measure.weights.size());
  for (int k = 0; k < areas.size(); ++k) {
    if (map[k] < 0) return std::numeric_limits<double>::infinity();
    matched(map[k]) += areas(k);
  }
  double residual = 0.0;
  for (int i = 0; i < matched.size(); ++i) {
    if (measure.weights(i) > 1e-9 * mass) {
      residual = std::max(residual, std::abs(matched(i) - measure.weights(i)) / measure.weights(i));
    } else if (matched(i) > 1e-9 * mass) {
      residual = std::numeric_limits<double>::infinity();
    }
  }
  return residual;
}

}  // namespace chords
