#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "chords/grid.hpp"

namespace chords {

// Shared polytope geometry. Both H- and V-representations are resolved to
// this at construction time, so all queries afterwards are table lookups.
// Facets are irredundant; in 2D facets are sorted by normal angle and
// facet_vertices[k] = {k, k+1 mod V}; in 3D facet_vertices holds an ordered
// boundary loop per facet.
struct PolytopeData {
  Eigen::MatrixXd normals;  // facets x n, unit rows, outward
  Eigen::VectorXd offsets;  // support numbers of the facet planes
  Eigen::MatrixXd vertices;  // vertices x n
  std::vector<std::vector<int>> facet_vertices;
  Eigen::VectorXd facet_areas;
  double volume = 0.0;
  Eigen::VectorXd centroid;
};

struct EllipsoidData {
  Eigen::VectorXd semi_axes;  // ascending, positive
  Eigen::MatrixXd rotation;   // orthogonal, columns are axis directions
  Eigen::VectorXd center;
};

struct BallData {
  double radius = 0.0;
  Eigen::VectorXd center;
};

// Immutable convex body. Polytopes are supported in dimensions 2 and 3;
// balls and ellipsoids in any dimension >= 2.
class Body {
 public:
  enum class Kind { hpolytope, vpolytope, ellipsoid, ball };

  // Empty placeholder (dim 0); assign a factory result before use.
  Body() = default;

  static Body hpolytope(const Eigen::MatrixXd& normals, const Eigen::VectorXd& offsets);
  static Body vpolytope(const Eigen::MatrixXd& vertices);
  static Body ellipsoid(Eigen::VectorXd semi_axes, Eigen::MatrixXd rotation,
                        Eigen::VectorXd center);
  static Body ball(double radius, Eigen::VectorXd center);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_polytope() const {
    return kind_ == Kind::hpolytope || kind_ == Kind::vpolytope;
  }
  const PolytopeData& poly() const;
  const EllipsoidData& ellipsoid_data() const;
  const BallData& ball_data() const;

 private:
  Kind kind_ = Kind::ball;
  int dim_ = 0;
  std::variant<PolytopeData, EllipsoidData, BallData> data_;
};

// h_K(u) = max over K of <x,u>; u need not be normalized (the support
// function extends 1-homogeneously).
double support_eval(const Body& body, const Eigen::VectorXd& u);

// A boundary point attaining the support value in direction u. For polytopes
// this is a vertex; ties are broken lexicographically.
Eigen::VectorXd support_point(const Body& body, const Eigen::VectorXd& u);

// Exit parameter max{ t >= 0 : z + t u in K } for z in K (u unit).
// Throws DomainError if z lies outside the body beyond tolerance.
double radial_eval(const Body& body, const Eigen::VectorXd& z, const Eigen::VectorXd& u);

// Length of the intersection of K with the full line { z + t u : t real }.
// Total: returns 0 when the line misses the body.
double xray(const Body& body, const Eigen::VectorXd& z, const Eigen::VectorXd& u);

bool contains(const Body& body, const Eigen::VectorXd& z);

// Max distance from the body's centroid (or center) to its boundary.
double circumradius(const Body& body);

struct WulffResult {
  Body body;                   // intersection of { x . u_i <= h_i }, canonical
  Eigen::VectorXd induced;     // support values of that body at every grid direction
  std::vector<char> active;    // whether direction i contributes a facet
};

// Halfspace intersection of a support vector; computed by dualizing to a
// convex hull of the points u_i / h_i (the grid guarantees h_i > 0).
WulffResult wulff_shape(const SupportVector& h);

struct BodyMetrics {
  double volume = 0.0;
  Eigen::VectorXd centroid;
  Eigen::MatrixXd facet_normals;  // empty for smooth bodies
  Eigen::VectorXd facet_areas;    // d(volume)/d(offset_i) for polytopes
};

BodyMetrics volume_and_facet_data(const Body& body);

// Image under an invertible linear map. Polytopes map exactly; balls become
// ellipsoids via the SVD of M * (axes frame).
Body linear_image(const Body& body, const Eigen::MatrixXd& M);

struct JohnDecomposition {
  EllipsoidData ellipsoid;   // enclosing ellipsoid E with K inside E
  double shrink_factor = 0;  // certified factor c with c*E inside K (1/n here)
  bool rotationally_symmetric = false;
  double r = 0.0;  // when rotationally symmetric: h_E(x) = |A x| with
  double a = 0.0;  // A = diag(r a^{1/n}, ..., r a^{1/n}, r a^{(1-n)/n})
};

// Minimum-volume enclosing ellipsoid of an origin-symmetric body
// (multiplicative-update algorithm on the vertex set, inflated so the
// containment certificate holds exactly). Throws DomainError for bodies that
// are not origin-symmetric.
JohnDecomposition john_ellipsoid(const Body& body);

}  // namespace chords
