#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

namespace chords {

// Quadrature grid on the unit sphere S^{n-1}. Directions come in exact
// antipodal pairs and weights sum to the sphere area n * unit_ball_volume(n).
//
// Zonal grids group directions into rings of constant last coordinate:
//   n=2: midpoint angles, equal weights (exact for trigonometric polynomials);
//   n=3: Gauss-Legendre nodes in the last coordinate times a uniform azimuthal
//        grid (weights sum exactly; exact for high-degree zonal integrands).
struct SphericalGrid {
  int dim = 0;
  Eigen::MatrixXd directions;  // rows are unit vectors
  Eigen::VectorXd weights;
  bool zonal = false;

  std::vector<int> antipode;  // index of -u_i for each i
  std::vector<int> ring_id;   // zonal only: ring index per direction
  std::vector<std::vector<int>> rings;  // zonal only: members per ring

  // Orbits under sign flips of every coordinate; the natural unknowns for
  // even, rotationally symmetric profiles. Empty for non-zonal grids.
  std::vector<int> orbit_id;
  std::vector<std::vector<int>> orbits;

  int size() const { return static_cast<int>(directions.rows()); }

  // Uniform midpoint grid on the circle; count must be a positive multiple
  // of 4 so the grid is antipodally closed and avoids the coordinate axes.
  static SphericalGrid circle(int count);

  // Zonal grid with the given number of rings (even, >= 2).
  // n=2 yields 2*rings directions; n=3 yields rings * (2*rings) directions.
  static SphericalGrid zonal_rings(int n, int ring_count);

  // Grid with explicitly given directions (each accompanied by its exact
  // negation) and weights; used for per-body measures and small fixtures.
  static SphericalGrid explicit_grid(Eigen::MatrixXd directions, Eigen::VectorXd weights,
                                     bool zonal_flag = false);

  // Throws RepresentationError on violated invariants.
  void validate() const;
};

using GridPtr = std::shared_ptr<const SphericalGrid>;

// Support-function samples on a grid; all values strictly positive.
struct SupportVector {
  GridPtr grid;
  Eigen::VectorXd values;

  void validate() const;
};

}  // namespace chords
