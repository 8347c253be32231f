#include "chords/construction.hpp"

#include <algorithm>
#include <cmath>

#include "chords/constants.hpp"
#include "chords/errors.hpp"
#include "chords/omega.hpp"
#include "radial.hpp"

namespace chords {

namespace {

// (1/n) * integral over the sphere of |N y|^{q-1-n} rho_{K,z}^{q-1}(y) dy.
// 2D: exact arcs with extra breakpoints where |N y| varies on scale eps
// (around the poles); 3D: zonal grid with doubled rings.
double weighted_radial_factor(const Body& solved, const Eigen::VectorXd& z,
                              const ProblemParams& params, const Resolution& res) {
  const int n = params.n;
  const double eps = params.epsilon;
  const double wexp = params.q - 1.0 - n;
  detail::RadialWeight weight = [&](const Eigen::VectorXd& u, double) {
    const double un = u(n - 1);
    const double np = u.head(n - 1).squaredNorm();
    return std::pow(std::sqrt(np + eps * eps * un * un), wexp);
  };

  if (n == 2 && solved.is_polytope()) {
    std::vector<double> breaks;
    for (double pole : {M_PI / 2.0, 3.0 * M_PI / 2.0}) {
      breaks.push_back(pole);
      for (int k = 1; k <= 4; ++k) {
        breaks.push_back(pole + 0.5 * k * eps);
        breaks.push_back(pole - 0.5 * k * eps);
      }
    }
    return detail::polygon_radial_integral(solved.poly(), z.head<2>(), params.q - 1.0,
                                           std::max(res.arc_nodes, 24), &weight, &breaks) /
           n;
  }
  if (n == 3) {
    const SphericalGrid grid = SphericalGrid::zonal_rings(3, 2 * std::max(res.rings, 24));
    return detail::grid_radial_integral(solved, z, params.q - 1.0, grid, &weight) / n;
  }
  throw UnsupportedError("weighted radial factor covers dimensions 2 and 3");
}

}  // namespace

EpsilonMaps EpsilonMaps::build(int n, double eps) {
  if (n < 2) throw DomainError("epsilon maps: dimension must be >= 2");
  if (!(eps > 0.0) || !(eps <= 0.5)) throw DomainError("epsilon maps: eps must lie in (0, 1/2]");
  EpsilonMaps maps;
  maps.M = Eigen::MatrixXd::Identity(n, n);
  maps.Minv = Eigen::MatrixXd::Identity(n, n);
  maps.N = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    maps.M(i, i) = eps;
    maps.Minv(i, i) = 1.0 / eps;
  }
  maps.N(n - 1, n - 1) = eps;
  return maps;
}

Body build_stretched_solution(const Body& solved, const ProblemParams& params) {
  params.validate();
  const int n = solved.dim();
  if (n != params.n) throw DomainError("build_stretched_solution: dimension mismatch");
  const EpsilonMaps maps = EpsilonMaps::build(n, params.epsilon);
  const double scale = std::pow(params.epsilon, params.stretch_exponent());
  return linear_image(solved, scale * maps.Minv);
}

double induced_density_eval(const Eigen::VectorXd& x, const Body& solved,
                            const ProblemParams& params, const Resolution& res) {
  const int n = params.n;
  if (x.size() != n) throw DomainError("induced_density_eval: dimension mismatch");
  const double eps = params.epsilon;

  // Direction seen by the un-stretched body.
  Eigen::VectorXd mx = x;
  for (int i = 0; i + 1 < n; ++i) mx(i) /= eps;
  const double mxn = mx.norm();
  const Eigen::VectorXd x_eps = mx / mxn;

  const double h_at = support_eval(solved, x_eps);
  const Eigen::VectorXd z = support_point(solved, x_eps);
  const double factor = weighted_radial_factor(solved, z, params, res);

  const double xn = std::abs(x(n - 1));
  const double rp = x.head(n - 1).norm();
  const double nx = std::sqrt(rp * rp + eps * eps * xn * xn);  // |N x|
  return std::pow(h_at, 1.0 - params.p) * std::pow(rp, params.alpha) *
         std::pow(xn, params.beta) *
         std::pow(nx, -params.gamma - params.alpha - n - params.p) * factor;
}

TransformCheck quermass_transform_check(const Body& solved, const ProblemParams& params,
                                        const Eigen::VectorXd& x, const Resolution& res) {
  const int n = params.n;
  if (x.size() != n) throw DomainError("quermass_transform_check: dimension mismatch");
  const double eps = params.epsilon;
  const EpsilonMaps maps = EpsilonMaps::build(n, eps);

  Eigen::VectorXd mx = maps.Minv * x;
  const Eigen::VectorXd x_eps = mx / mx.norm();
  const Eigen::VectorXd z = support_point(solved, x_eps);

  // Left side: the dual quermassintegral of the stretched (undilated) body
  // at the mapped boundary point, evaluated from scratch.
  const Body stretched = linear_image(solved, maps.Minv);
  const Eigen::VectorXd zs = maps.Minv * z;
  const Estimate direct =
      dual_quermass(stretched, zs, params.q - 1.0, Method::radial_quadrature, res);

  // Right side: the substitution formula on the original body.
  const double rhs = std::pow(eps, 2.0 - params.q) * weighted_radial_factor(solved, z, params, res);

  TransformCheck out;
  out.lhs = direct.value;
  out.rhs = rhs;
  out.rel_err = std::abs(out.lhs - out.rhs) / std::max(1e-300, std::abs(out.rhs));
  return out;
}

DiscreteMeasure density_on_facets(const Body& body,
                                  const std::function<double(const Eigen::VectorXd&)>& density) {
  if (!body.is_polytope() || body.dim() != 2) {
    throw UnsupportedError("density_on_facets covers 2D polytopes");
  }
  const PolytopeData& P = body.poly();
  const int m = static_cast<int>(P.normals.rows());

  // Facets are already sorted by normal angle; atom j collects the density
  // over the arc between the bisectors toward its angular neighbors.
  std::vector<double> angle(m);
  for (int j = 0; j < m; ++j) angle[j] = std::atan2(P.normals(j, 1), P.normals(j, 0));

  std::vector<double> nodes, wts;
  detail::gauss_legendre(6, nodes, wts);

  DiscreteMeasure out;
  out.directions = P.normals;
  out.weights = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < m; ++j) {
    const double prev = angle[(j + m - 1) % m];
    const double next = angle[(j + 1) % m];
    double lo = angle[j] - 0.5 * std::remainder(angle[j] - prev, 2.0 * M_PI);
    double hi = angle[j] + 0.5 * std::remainder(next - angle[j], 2.0 * M_PI);
    // remainder maps gaps into (-pi, pi]; arcs of a convex polygon are < pi.
    double acc = 0.0;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (size_t k = 0; k < nodes.size(); ++k) {
      const double t = mid + half * nodes[k];
      Eigen::VectorXd u(2);
      u << std::cos(t), std::sin(t);
      acc += wts[k] * half * density(u);
    }
    out.weights(j) = acc;
  }
  return out;
}

DiscreteMeasure pushforward_density(const SphericalGrid& grid, double eps,
                                    const std::function<double(const Eigen::VectorXd&)>& density) {
  if (grid.dim != 2) throw UnsupportedError("pushforward_density covers 2D grids");
  if (!(eps > 0.0) || !(eps <= 0.5)) throw DomainError("pushforward_density: eps in (0, 1/2]");
  const int m = grid.size();

  // Image of direction angle t under the normal map, and the map's Jacobian
  // dt'/dt = eps / (eps^2 cos^2 t + sin^2 t).
  auto image = [&](double t) {
    Eigen::VectorXd u(2);
    u << eps * std::cos(t), std::sin(t);
    u.normalize();
    return u;
  };
  auto jac = [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    return eps / (eps * eps * c * c + s * s);
  };

  std::vector<double> nodes, wts;
  detail::gauss_legendre(6, nodes, wts);

  DiscreteMeasure out;
  out.directions.resize(m, 2);
  out.weights = Eigen::VectorXd::Zero(m);
  const double half_cell = M_PI / m;  // uniform circle grid: cell width 2*pi/m
  for (int j = 0; j < m; ++j) {
    const double tj = std::atan2(grid.directions(j, 1), grid.directions(j, 0));
    out.directions.row(j) = image(tj);
    double acc = 0.0;
    for (size_t k = 0; k < nodes.size(); ++k) {
      const double t = tj + half_cell * nodes[k];
      acc += wts[k] * half_cell * jac(t) * density(image(t));
    }
    out.weights(j) = acc;
  }
  return out;
}

SweepResult epsilon_sweep(const ProblemParams& base, const std::vector<double>& eps_list,
                          int rings, const Resolution& res) {
  if (eps_list.empty()) throw ConfigError("epsilon_sweep: empty epsilon list");
  for (size_t i = 0; i + 1 < eps_list.size(); ++i) {
    if (!(eps_list[i] > eps_list[i + 1])) {
      throw ConfigError("epsilon_sweep: epsilons must be strictly descending");
    }
  }

  SweepResult out;
  for (double eps : eps_list) {
    SweepRecord rec;
    rec.epsilon = eps;
    try {
      ProblemParams params = base;
      params.epsilon = eps;
      params.validate_for_construction();

      const SphericalGrid grid = SphericalGrid::zonal_rings(params.n, rings);
      const ClassicalProblem problem = discretize_density(
          [&](const Eigen::VectorXd& u) { return construction_density(u, params); }, grid);
      const SolveReport solve = solve_classical_minkowski(problem);
      rec.solver_residual = solve.residual;

      const Body stretched = build_stretched_solution(solve.body, params);
      rec.iq = chord_integral_boundary(stretched, params.q, res);
      rec.decay_bound = params.decay_bound(eps);
      rec.ratio = rec.iq.value / rec.decay_bound;
      rec.ok = true;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    out.records.push_back(rec);
  }

  // Log-log slope over successful entries (least squares).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const SweepRecord& r : out.records) {
    if (!r.ok || !(r.iq.value > 0.0)) continue;
    const double lx = std::log(r.epsilon), ly = std::log(r.iq.value);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  out.fitted_slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
  return out;
}

}  // namespace chords
