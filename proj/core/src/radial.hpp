#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "chords/body.hpp"
#include "chords/grid.hpp"

namespace chords::detail {

// Optional integrand weight W(u, rho) evaluated at a unit direction.
using RadialWeight = std::function<double(const Eigen::VectorXd& u, double rho)>;

// Exact-arc integral over the unit circle of W(u) * rho_{K,z}(u)^power for a
// 2D polytope. The circle is split at the vertex directions seen from z (plus
// caller breakpoints); on each open arc the exit edge is fixed and
// rho(theta) = b / cos(theta - psi), which Gauss-Legendre integrates to near
// machine precision. Arcs whose exit edge passes through z itself (boundary
// base point, rho = 0 there) contribute zero, which realizes the rho > 0
// restriction for boundary base points.
double polygon_radial_integral(const PolytopeData& P, const Eigen::Vector2d& z, double power,
                               int nodes_per_arc, const RadialWeight* weight = nullptr,
                               const std::vector<double>* extra_breakpoints = nullptr);

// Grid quadrature of W(u) * rho_{K,z}(u)^power over the sphere for any body;
// directions with rho <= 1e-12 are skipped (boundary convention).
double grid_radial_integral(const Body& body, const Eigen::VectorXd& z, double power,
                            const SphericalGrid& grid, const RadialWeight* weight = nullptr);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace chords::detail
