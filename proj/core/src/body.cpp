#include "chords/body.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include "chords/constants.hpp"
#include "chords/errors.hpp"
#include "chords/omega.hpp"
#include "hull.hpp"

namespace chords {

namespace {

double coord_scale(const Eigen::MatrixXd& pts) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    s = std::max(s, pts.row(i).lpNorm<Eigen::Infinity>());
  return std::max(1.0, s);
}

void check_direction(const Eigen::VectorXd& u, int dim) {
  if (u.size() != dim) throw DomainError("direction has wrong dimension");
  if (std::abs(u.norm() - 1.0) > tol::kUnitVector)
    throw DomainError("direction must be a unit vector");
}

// Orient every facet loop so the fan vector area points along the outward
// normal; later formulas then carry consistent signs.
void orient_loops(PolytopeData& P) {
  if (P.vertices.cols() != 3) return;
  for (std::size_t f = 0; f < P.facet_vertices.size(); ++f) {
    auto& loop = P.facet_vertices[f];
    if (loop.size() < 3) continue;
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    const Eigen::Vector3d v0 = P.vertices.row(loop[0]);
    for (std::size_t k = 1; k + 1 < loop.size(); ++k) {
      const Eigen::Vector3d a = P.vertices.row(loop[k]);
      const Eigen::Vector3d b = P.vertices.row(loop[k + 1]);
      acc += (a - v0).cross(b - v0);
    }
    const Eigen::Vector3d n = P.normals.row(f);
    if (acc.dot(n) < 0.0) std::reverse(loop.begin(), loop.end());
  }
}

void recompute_metrics(PolytopeData& P) {
  const int n = static_cast<int>(P.vertices.cols());
  const int F = static_cast<int>(P.normals.rows());
  P.facet_areas.resize(F);
  const Eigen::VectorXd ref = P.vertices.colwise().mean();

  if (n == 2) {
    double vol = 0.0;
    Eigen::Vector2d cen = Eigen::Vector2d::Zero();
    for (int f = 0; f < F; ++f) {
      const auto& e = P.facet_vertices[f];
      const Eigen::Vector2d a = P.vertices.row(e[0]);
      const Eigen::Vector2d b = P.vertices.row(e[1]);
      P.facet_areas(f) = (b - a).norm();
      const double dist = P.offsets(f) - P.normals.row(f).dot(ref);
      const double tri = 0.5 * P.facet_areas(f) * dist;  // triangle (ref, a, b)
      vol += tri;
      cen += tri * (ref.head<2>() + a + b) / 3.0;
    }
    P.volume = vol;
    P.centroid = (vol > 0) ? Eigen::VectorXd(cen / vol) : ref;
  } else {
    orient_loops(P);
    double vol = 0.0;
    Eigen::Vector3d cen = Eigen::Vector3d::Zero();
    const Eigen::Vector3d r3 = ref;
    for (int f = 0; f < F; ++f) {
      const auto& loop = P.facet_vertices[f];
      double area = 0.0;
      const Eigen::Vector3d v0 = P.vertices.row(loop[0]);
      const Eigen::Vector3d nrm = P.normals.row(f);
      for (std::size_t k = 1; k + 1 < loop.size(); ++k) {
        const Eigen::Vector3d a = P.vertices.row(loop[k]);
        const Eigen::Vector3d b = P.vertices.row(loop[k + 1]);
        area += 0.5 * (a - v0).cross(b - v0).dot(nrm);
        // Tetrahedron (ref, v0, a, b).
        const double tv = (v0 - r3).cross(a - r3).dot(b - r3) / 6.0;
        vol += tv;
        cen += tv * (r3 + v0 + a + b) / 4.0;
      }
      P.facet_areas(f) = area;
    }
    P.volume = vol;
    P.centroid = (vol > 0) ? Eigen::VectorXd(cen / vol) : ref;
  }
  if (!(P.volume > tol::kDegeneracy))
    throw DegeneracyError("polytope volume below degeneracy tolerance");
}

// Canonical polygon from halfspaces with strictly interior origin.
// Returns active mask aligned with input rows.
PolytopeData polygon_from_halfspaces(const Eigen::MatrixXd& normals, const Eigen::VectorXd& h,
                                     std::vector<char>* active_out) {
  const int m = static_cast<int>(normals.rows());
  Eigen::MatrixXd duals(m, 2);
  for (int i = 0; i < m; ++i) duals.row(i) = normals.row(i) / h(i);
  std::vector<int> hull = detail::hull2d(duals);  // CCW == by normal angle
  const int F = static_cast<int>(hull.size());
  if (F < 3) throw DegeneracyError("halfspace intersection is degenerate");

  // Start the canonical ordering at the smallest normal angle.
  int start = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < F; ++k) {
    const double ang = std::atan2(normals(hull[k], 1), normals(hull[k], 0));
    if (ang < best) best = ang, start = k;
  }
  std::rotate(hull.begin(), hull.begin() + start, hull.end());

  PolytopeData P;
  P.normals.resize(F, 2);
  P.offsets.resize(F);
  for (int k = 0; k < F; ++k) {
    P.normals.row(k) = normals.row(hull[k]);
    P.offsets(k) = h(hull[k]);
  }
  P.vertices.resize(F, 2);
  for (int k = 0; k < F; ++k) {
    const int i = (k + F - 1) % F;  // vertex k joins facets i and k
    Eigen::Matrix2d A;
    A.row(0) = P.normals.row(i);
    A.row(1) = P.normals.row(k);
    const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    if (std::abs(det) < tol::kDegeneracy)
      throw DegeneracyError("adjacent facets are parallel");
    P.vertices.row(k) =
        A.inverse() * Eigen::Vector2d(P.offsets(i), P.offsets(k));
  }
  P.facet_vertices.resize(F);
  for (int k = 0; k < F; ++k) P.facet_vertices[k] = {k, (k + 1) % F};
  recompute_metrics(P);
  if (active_out) {
    active_out->assign(m, 0);
    for (int k = 0; k < F; ++k) (*active_out)[hull[k]] = 1;
  }
  return P;
}

// Canonical 3D polytope from halfspaces with strictly interior origin.
PolytopeData polytope3_from_halfspaces(const Eigen::MatrixXd& normals, const Eigen::VectorXd& h,
                                       std::vector<char>* active_out) {
  const int m = static_cast<int>(normals.rows());
  Eigen::MatrixXd duals(m, 3);
  for (int i = 0; i < m; ++i) duals.row(i) = normals.row(i) / h(i);
  const auto tris = detail::hull3d(duals);

  // One primal vertex per dual facet; concurrent planes collapse by proximity.
  const double dedupe = 1e-9;
  std::vector<Eigen::Vector3d> verts;
  std::vector<int> tri_vertex(tris.size());
  double scale = 1.0;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    Eigen::Matrix3d A;
    Eigen::Vector3d rhs;
    for (int k = 0; k < 3; ++k) {
      A.row(k) = normals.row(tris[t][k]);
      rhs(k) = h(tris[t][k]);
    }
    const Eigen::Vector3d v = A.partialPivLu().solve(rhs);
    scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
    int found = -1;
    for (std::size_t j = 0; j < verts.size(); ++j)
      if ((verts[j] - v).norm() <= dedupe * scale) {
        found = static_cast<int>(j);
        break;
      }
    if (found < 0) {
      verts.push_back(v);
      found = static_cast<int>(verts.size()) - 1;
    }
    tri_vertex[t] = found;
  }

  // Facet i <- primal vertices of dual triangles incident to dual point i.
  std::vector<std::vector<int>> facet_verts(m);
  for (std::size_t t = 0; t < tris.size(); ++t)
    for (int k = 0; k < 3; ++k) {
      auto& fv = facet_verts[tris[t][k]];
      if (std::find(fv.begin(), fv.end(), tri_vertex[t]) == fv.end())
        fv.push_back(tri_vertex[t]);
    }

  std::vector<int> active;
  for (int i = 0; i < m; ++i)
    if (facet_verts[i].size() >= 3) active.push_back(i);
  if (active.size() < 4) throw DegeneracyError("halfspace intersection is degenerate");

  PolytopeData P;
  const int F = static_cast<int>(active.size());
  P.normals.resize(F, 3);
  P.offsets.resize(F);
  P.vertices.resize(static_cast<int>(verts.size()), 3);
  for (std::size_t j = 0; j < verts.size(); ++j) P.vertices.row(j) = verts[j];
  P.facet_vertices.resize(F);
  for (int f = 0; f < F; ++f) {
    const int i = active[f];
    P.normals.row(f) = normals.row(i);
    P.offsets(f) = h(i);
    // Order the facet vertices by angle around the facet normal.
    const Eigen::Vector3d nrm = normals.row(i);
    Eigen::Vector3d b1 = nrm.unitOrthogonal();
    Eigen::Vector3d b2 = nrm.cross(b1);
    auto& fv = facet_verts[i];
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (int j : fv) c += verts[j];
    c /= static_cast<double>(fv.size());
    std::sort(fv.begin(), fv.end(), [&](int aidx, int bidx) {
      const Eigen::Vector3d da = verts[aidx] - c, db = verts[bidx] - c;
      return std::atan2(da.dot(b2), da.dot(b1)) < std::atan2(db.dot(b2), db.dot(b1));
    });
    P.facet_vertices[f] = fv;
  }
  recompute_metrics(P);
  if (active_out) {
    active_out->assign(m, 0);
    for (int i : active) (*active_out)[i] = 1;
  }
  return P;
}

PolytopeData polytope_from_halfspaces(const Eigen::MatrixXd& normals, const Eigen::VectorXd& h,
                                      std::vector<char>* active_out) {
  const int n = static_cast<int>(normals.cols());
  if (n == 2) return polygon_from_halfspaces(normals, h, active_out);
  if (n == 3) return polytope3_from_halfspaces(normals, h, active_out);
  throw UnsupportedError("polytopes are supported in dimensions 2 and 3 only");
}

// Subgradient search for a strictly interior point of { n_i . x <= h_i }.
Eigen::VectorXd interior_point(const Eigen::MatrixXd& normals, const Eigen::VectorXd& h) {
  const int n = static_cast<int>(normals.cols());
  const int m = static_cast<int>(normals.rows());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd bestx = x;
  double bestg = std::numeric_limits<double>::infinity();
  double step = std::max(1.0, h.cwiseAbs().maxCoeff());
  for (int it = 0; it < 5000; ++it) {
    int worst = 0;
    double g = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double v = normals.row(i).dot(x) - h(i);
      if (v > g) g = v, worst = i;
    }
    if (g < bestg) bestg = g, bestx = x;
    if (g < -1e-6 * step) break;
    x -= (step / (1.0 + 0.05 * it)) * normals.row(worst).transpose();
  }
  if (!(bestg < 0.0))
    throw RepresentationError("halfspace intersection has empty interior");
  return bestx;
}

PolytopeData polygon_from_vertices(const Eigen::MatrixXd& pts) {
  const std::vector<int> hull = detail::hull2d(pts);
  const int V = static_cast<int>(hull.size());
  PolytopeData P;
  P.vertices.resize(V, 2);
  for (int k = 0; k < V; ++k) P.vertices.row(k) = pts.row(hull[k]);
  P.normals.resize(V, 2);
  P.offsets.resize(V);
  P.facet_vertices.resize(V);
  for (int k = 0; k < V; ++k) {
    const Eigen::Vector2d a = P.vertices.row(k);
    const Eigen::Vector2d b = P.vertices.row((k + 1) % V);
    const Eigen::Vector2d t = (b - a).normalized();
    P.normals.row(k) << t.y(), -t.x();  // outward for CCW traversal
    P.offsets(k) = P.normals.row(k).dot(a);
    P.facet_vertices[k] = {k, (k + 1) % V};
  }
  recompute_metrics(P);
  return P;
}

PolytopeData polytope3_from_vertices(const Eigen::MatrixXd& pts) {
  const auto tris = detail::hull3d(pts);
  const double scale = coord_scale(pts);

  // Collect hull vertices and reindex.
  std::vector<int> used;
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k)
      if (std::find(used.begin(), used.end(), t[k]) == used.end()) used.push_back(t[k]);
  std::sort(used.begin(), used.end());
  std::map<int, int> remap;
  for (std::size_t j = 0; j < used.size(); ++j) remap[used[j]] = static_cast<int>(j);

  // Merge coplanar triangles into facets via union-find on shared edges.
  struct Tri {
    std::array<int, 3> v;
    Eigen::Vector3d n;
    double off;
  };
  std::vector<Tri> T(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    T[t].v = tris[t];
    const Eigen::Vector3d a = pts.row(tris[t][0]), b = pts.row(tris[t][1]),
                          c = pts.row(tris[t][2]);
    T[t].n = (b - a).cross(c - a).normalized();
    T[t].off = T[t].n.dot(a);
  }
  std::vector<int> parent(T.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::map<std::pair<int, int>, std::vector<int>> by_edge;
  for (std::size_t t = 0; t < T.size(); ++t)
    for (int k = 0; k < 3; ++k) {
      int a = T[t].v[k], b = T[t].v[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      by_edge[{a, b}].push_back(static_cast<int>(t));
    }
  for (const auto& [e, owners] : by_edge) {
    if (owners.size() != 2) continue;
    const int a = owners[0], b = owners[1];
    if (T[a].n.dot(T[b].n) > 1.0 - 1e-10 && std::abs(T[a].off - T[b].off) < 1e-9 * scale)
      parent[find(a)] = find(b);
  }
  std::map<int, std::vector<int>> groups;
  for (std::size_t t = 0; t < T.size(); ++t) groups[find(static_cast<int>(t))].push_back(static_cast<int>(t));

  PolytopeData P;
  P.vertices.resize(static_cast<int>(used.size()), 3);
  for (std::size_t j = 0; j < used.size(); ++j) P.vertices.row(j) = pts.row(used[j]);
  const int F = static_cast<int>(groups.size());
  P.normals.resize(F, 3);
  P.offsets.resize(F);
  P.facet_vertices.resize(F);
  int f = 0;
  for (const auto& [root, members] : groups) {
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    for (int t : members) n += T[t].n;
    n.normalize();
    P.normals.row(f) = n;
    P.offsets(f) = n.dot(Eigen::Vector3d(pts.row(T[members[0]].v[0])));
    // Boundary loop: directed edges used exactly once within the group.
    std::map<int, int> succ;
    std::map<std::pair<int, int>, int> count;
    for (int t : members)
      for (int k = 0; k < 3; ++k) {
        int a = T[t].v[k], b = T[t].v[(k + 1) % 3];
        count[{std::min(a, b), std::max(a, b)}]++;
      }
    for (int t : members)
      for (int k = 0; k < 3; ++k) {
        const int a = T[t].v[k], b = T[t].v[(k + 1) % 3];
        if (count[{std::min(a, b), std::max(a, b)}] == 1) succ[a] = b;
      }
    std::vector<int> loop;
    int cur = succ.begin()->first;
    for (std::size_t guard = 0; guard <= succ.size(); ++guard) {
      loop.push_back(remap.at(cur));
      cur = succ.at(cur);
      if (cur == succ.begin()->first) break;
    }
    P.facet_vertices[f] = loop;
    ++f;
  }
  recompute_metrics(P);
  return P;
}

}  // namespace

const PolytopeData& Body::poly() const {
  if (!is_polytope()) throw DomainError("body is not a polytope");
  return std::get<PolytopeData>(data_);
}

const EllipsoidData& Body::ellipsoid_data() const {
  if (kind_ != Kind::ellipsoid) throw DomainError("body is not an ellipsoid");
  return std::get<EllipsoidData>(data_);
}

const BallData& Body::ball_data() const {
  if (kind_ != Kind::ball) throw DomainError("body is not a ball");
  return std::get<BallData>(data_);
}

Body Body::hpolytope(const Eigen::MatrixXd& normals, const Eigen::VectorXd& offsets) {
  const int n = static_cast<int>(normals.cols());
  const int m = static_cast<int>(normals.rows());
  if (m != offsets.size() || m == 0)
    throw RepresentationError("hpolytope: normals/offsets size mismatch");
  Eigen::MatrixXd N = normals;
  for (int i = 0; i < m; ++i) {
    const double nn = N.row(i).norm();
    if (std::abs(nn - 1.0) > tol::kUnitVector)
      throw RepresentationError("hpolytope: facet normals must be unit vectors");
    // Rows within an ulp of unit pass through unchanged, so rebuilding a
    // body from its own serialized normals is bit-exact.
    if (std::abs(nn - 1.0) > 4e-16) N.row(i) /= nn;
  }

  Body b;
  b.kind_ = Kind::hpolytope;
  b.dim_ = n;
  if (offsets.minCoeff() > 0.0) {
    b.data_ = polytope_from_halfspaces(N, offsets, nullptr);
  } else {
    const Eigen::VectorXd c = interior_point(N, offsets);
    Eigen::VectorXd shifted = offsets - N * c;
    PolytopeData P = polytope_from_halfspaces(N, shifted, nullptr);
    P.vertices.rowwise() += c.transpose();
    for (Eigen::Index f = 0; f < P.offsets.size(); ++f)
      P.offsets(f) += P.normals.row(f).dot(c);
    recompute_metrics(P);
    b.data_ = std::move(P);
  }
  return b;
}

Body Body::vpolytope(const Eigen::MatrixXd& vertices) {
  const int n = static_cast<int>(vertices.cols());
  Body b;
  b.kind_ = Kind::vpolytope;
  b.dim_ = n;
  if (n == 2)
    b.data_ = polygon_from_vertices(vertices);
  else if (n == 3)
    b.data_ = polytope3_from_vertices(vertices);
  else
    throw UnsupportedError("polytopes are supported in dimensions 2 and 3 only");
  return b;
}

Body Body::ellipsoid(Eigen::VectorXd semi_axes, Eigen::MatrixXd rotation, Eigen::VectorXd center) {
  const int n = static_cast<int>(semi_axes.size());
  if (n < 2) throw RepresentationError("ellipsoid: dimension must be >= 2");
  for (int i = 0; i < n; ++i) {
    if (!(semi_axes(i) > 0.0)) throw RepresentationError("ellipsoid: semi-axes must be positive");
    if (i && semi_axes(i) < semi_axes(i - 1) - tol::kUnitVector)
      throw RepresentationError("ellipsoid: semi-axes must be ascending");
  }
  if (rotation.rows() != n || rotation.cols() != n ||
      (rotation * rotation.transpose() - Eigen::MatrixXd::Identity(n, n)).lpNorm<Eigen::Infinity>() >
          tol::kOrthogonal)
    throw RepresentationError("ellipsoid: rotation must be orthogonal");
  if (center.size() != n) throw RepresentationError("ellipsoid: center has wrong dimension");
  Body b;
  b.kind_ = Kind::ellipsoid;
  b.dim_ = n;
  b.data_ = EllipsoidData{std::move(semi_axes), std::move(rotation), std::move(center)};
  return b;
}

Body Body::ball(double radius, Eigen::VectorXd center) {
  if (!(radius > 0.0)) throw RepresentationError("ball: radius must be positive");
  if (center.size() < 2) throw RepresentationError("ball: dimension must be >= 2");
  Body b;
  b.kind_ = Kind::ball;
  b.dim_ = static_cast<int>(center.size());
  b.data_ = BallData{radius, std::move(center)};
  return b;
}

double support_eval(const Body& body, const Eigen::VectorXd& u) {
  if (u.size() != body.dim()) throw DomainError("support_eval: dimension mismatch");
  switch (body.kind()) {
    case Body::Kind::hpolytope:
    case Body::Kind::vpolytope: {
      const auto& P = body.poly();
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < P.vertices.rows(); ++i)
        best = std::max(best, P.vertices.row(i).dot(u));
      return best;
    }
    case Body::Kind::ellipsoid: {
      const auto& E = body.ellipsoid_data();
      return E.center.dot(u) +
             (E.semi_axes.asDiagonal() * (E.rotation.transpose() * u)).norm();
    }
    case Body::Kind::ball: {
      const auto& B = body.ball_data();
      return B.center.dot(u) + B.radius * u.norm();
    }
  }
  throw Error("unreachable");
}

Eigen::VectorXd support_point(const Body& body, const Eigen::VectorXd& u) {
  if (u.size() != body.dim()) throw DomainError("support_point: dimension mismatch");
  if (u.norm() < tol::kRay) throw DomainError("support_point: zero direction");
  switch (body.kind()) {
    case Body::Kind::hpolytope:
    case Body::Kind::vpolytope: {
      const auto& P = body.poly();
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < P.vertices.rows(); ++i)
        best = std::max(best, P.vertices.row(i).dot(u));
      const double slack = 1e-12 * std::max(1.0, std::abs(best));
      int pick = -1;
      for (Eigen::Index i = 0; i < P.vertices.rows(); ++i) {
        if (P.vertices.row(i).dot(u) < best - slack) continue;
        if (pick < 0) {
          pick = static_cast<int>(i);
          continue;
        }
        for (int c = 0; c < body.dim(); ++c) {
          if (P.vertices(i, c) < P.vertices(pick, c) - tol::kRay) {
            pick = static_cast<int>(i);
            break;
          }
          if (P.vertices(i, c) > P.vertices(pick, c) + tol::kRay) break;
        }
      }
      return P.vertices.row(pick);
    }
    case Body::Kind::ellipsoid: {
      const auto& E = body.ellipsoid_data();
      Eigen::VectorXd y = E.semi_axes.asDiagonal() * (E.rotation.transpose() * u);
      y /= y.norm();
      return E.center + E.rotation * (E.semi_axes.asDiagonal() * y);
    }
    case Body::Kind::ball: {
      const auto& B = body.ball_data();
      return B.center + B.radius * u / u.norm();
    }
  }
  throw Error("unreachable");
}

bool contains(const Body& body, const Eigen::VectorXd& z) {
  if (z.size() != body.dim()) throw DomainError("contains: dimension mismatch");
  switch (body.kind()) {
    case Body::Kind::hpolytope:
    case Body::Kind::vpolytope: {
      const auto& P = body.poly();
      const double slack = tol::kMembership * std::max(1.0, P.offsets.cwiseAbs().maxCoeff());
      for (Eigen::Index i = 0; i < P.normals.rows(); ++i)
        if (P.normals.row(i).dot(z) > P.offsets(i) + slack) return false;
      return true;
    }
    case Body::Kind::ellipsoid: {
      const auto& E = body.ellipsoid_data();
      const Eigen::VectorXd w =
          E.semi_axes.cwiseInverse().asDiagonal() * (E.rotation.transpose() * (z - E.center));
      return w.norm() <= 1.0 + tol::kMembership;
    }
    case Body::Kind::ball: {
      const auto& B = body.ball_data();
      return (z - B.center).norm() <= B.radius * (1.0 + tol::kMembership);
    }
  }
  throw Error("unreachable");
}

double radial_eval(const Body& body, const Eigen::VectorXd& z, const Eigen::VectorXd& u) {
  check_direction(u, body.dim());
  if (!contains(body, z)) throw DomainError("radial_eval: base point lies outside the body");
  switch (body.kind()) {
    case Body::Kind::hpolytope:
    case Body::Kind::vpolytope: {
      const auto& P = body.poly();
      double t = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < P.normals.rows(); ++i) {
        const double a = P.normals.row(i).dot(u);
        if (a > tol::kRay) {
          const double b = P.offsets(i) - P.normals.row(i).dot(z);
          t = std::min(t, b / a);
        }
      }
      if (!std::isfinite(t)) throw DegeneracyError("radial_eval: unbounded ray");
      return std::max(0.0, t);
    }
    case Body::Kind::ball: {
      const auto& B = body.ball_data();
      const Eigen::VectorXd d = z - B.center;
      const double ud = u.dot(d);
      const double disc = ud * ud - (d.squaredNorm() - B.radius * B.radius);
      return std::max(0.0, -ud + std::sqrt(std::max(0.0, disc)));
    }
    case Body::Kind::ellipsoid: {
      const auto& E = body.ellipsoid_data();
      const auto inv = E.semi_axes.cwiseInverse().asDiagonal();
      const Eigen::VectorXd w = inv * (E.rotation.transpose() * (z - E.center));
      const Eigen::VectorXd d = inv * (E.rotation.transpose() * u);
      const double A = d.squaredNorm(), B2 = w.dot(d), C = w.squaredNorm() - 1.0;
      const double disc = B2 * B2 - A * C;
      return std::max(0.0, (-B2 + std::sqrt(std::max(0.0, disc))) / A);
    }
  }
  throw Error("unreachable");
}

double xray(const Body& body, const Eigen::VectorXd& z, const Eigen::VectorXd& u) {
  check_direction(u, body.dim());
  if (z.size() != body.dim()) throw DomainError("xray: dimension mismatch");
  switch (body.kind()) {
    case Body::Kind::hpolytope:
    case Body::Kind::vpolytope: {
      const auto& P = body.poly();
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      const double slack = tol::kMembership * std::max(1.0, P.offsets.cwiseAbs().maxCoeff());
      for (Eigen::Index i = 0; i < P.normals.rows(); ++i) {
        const double a = P.normals.row(i).dot(u);
        const double b = P.offsets(i) - P.normals.row(i).dot(z);
        if (a > tol::kRay)
          hi = std::min(hi, b / a);
        else if (a < -tol::kRay)
          lo = std::max(lo, b / a);
        else if (b < -slack)
          return 0.0;
      }
      return std::max(0.0, hi - lo);
    }
    case Body::Kind::ball: {
      const auto& B = body.ball_data();
      const Eigen::VectorXd d = z - B.center;
      const double ud = u.dot(d);
      const double disc = ud * ud - (d.squaredNorm() - B.radius * B.radius);
      return disc > 0.0 ? 2.0 * std::sqrt(disc) : 0.0;
    }
    case Body::Kind::ellipsoid: {
      const auto& E = body.ellipsoid_data();
      const auto inv = E.semi_axes.cwiseInverse().asDiagonal();
      const Eigen::VectorXd w = inv * (E.rotation.transpose() * (z - E.center));
      const Eigen::VectorXd d = inv * (E.rotation.transpose() * u);
      const double A = d.squaredNorm(), B2 = w.dot(d), C = w.squaredNorm() - 1.0;
      const double disc = B2 * B2 - A * C;
      return disc > 0.0 ? 2.0 * std::sqrt(disc) / A : 0.0;
    }
  }
  throw Error("unreachable");
}

double circumradius(const Body& body) {
  switch (body.kind()) {
    case Body::Kind::hpolytope:
    case Body::Kind::vpolytope: {
      const auto& P = body.poly();
      double r = 0.0;
      for (Eigen::Index i = 0; i < P.vertices.rows(); ++i)
        r = std::max(r, (P.vertices.row(i).transpose() - P.centroid).norm());
      return r;
    }
    case Body::Kind::ellipsoid:
      return body.ellipsoid_data().semi_axes.maxCoeff();
    case Body::Kind::ball:
      return body.ball_data().radius;
  }
  throw Error("unreachable");
}

WulffResult wulff_shape(const SupportVector& h) {
  h.validate();
  const auto& g = *h.grid;
  WulffResult out;
  std::vector<char> active;
  PolytopeData P = polytope_from_halfspaces(g.directions, h.values, &active);
  // Construct through the public factory to keep one canonicalization path.
  out.body = Body::hpolytope(P.normals, P.offsets);
  out.active = std::move(active);
  out.induced.resize(g.size());
  for (int i = 0; i < g.size(); ++i)
    out.induced(i) = support_eval(out.body, g.directions.row(i).transpose());
  return out;
}

BodyMetrics volume_and_facet_data(const Body& body) {
  BodyMetrics m;
  switch (body.kind()) {
    case Body::Kind::hpolytope:
    case Body::Kind::vpolytope: {
      const auto& P = body.poly();
      m.volume = P.volume;
      m.centroid = P.centroid;
      m.facet_normals = P.normals;
      m.facet_areas = P.facet_areas;
      return m;
    }
    case Body::Kind::ellipsoid: {
      const auto& E = body.ellipsoid_data();
      m.volume = unit_ball_volume(body.dim()) * E.semi_axes.prod();
      m.centroid = E.center;
      return m;
    }
    case Body::Kind::ball: {
      const auto& B = body.ball_data();
      m.volume = unit_ball_volume(body.dim()) * std::pow(B.radius, body.dim());
      m.centroid = B.center;
      return m;
    }
  }
  throw Error("unreachable");
}

Body linear_image(const Body& body, const Eigen::MatrixXd& M) {
  const int n = body.dim();
  if (M.rows() != n || M.cols() != n) throw DomainError("linear_image: matrix has wrong shape");
  const double det = M.determinant();
  if (std::abs(det) < tol::kDegeneracy) throw DomainError("linear_image: matrix is singular");

  switch (body.kind()) {
    case Body::Kind::hpolytope:
    case Body::Kind::vpolytope: {
      const auto& P = body.poly();
      if (body.kind() == Body::Kind::vpolytope)
        return Body::vpolytope(P.vertices * M.transpose());
      const Eigen::MatrixXd Mit = M.inverse().transpose();
      Eigen::MatrixXd normals(P.normals.rows(), n);
      Eigen::VectorXd offsets(P.offsets.size());
      for (Eigen::Index f = 0; f < P.normals.rows(); ++f) {
        const Eigen::VectorXd nn = Mit * P.normals.row(f).transpose();
        const double s = nn.norm();
        normals.row(f) = nn / s;
        offsets(f) = P.offsets(f) / s;
      }
      return Body::hpolytope(normals, offsets);
    }
    case Body::Kind::ellipsoid:
    case Body::Kind::ball: {
      Eigen::MatrixXd frame;
      Eigen::VectorXd center;
      if (body.kind() == Body::Kind::ball) {
        frame = body.ball_data().radius * Eigen::MatrixXd::Identity(n, n);
        center = body.ball_data().center;
      } else {
        const auto& E = body.ellipsoid_data();
        frame = E.rotation * E.semi_axes.asDiagonal();
        center = E.center;
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M * frame, Eigen::ComputeFullU);
      Eigen::VectorXd axes = svd.singularValues();  // descending
      Eigen::MatrixXd rot = svd.matrixU();
      axes.reverseInPlace();
      rot = rot.rowwise().reverse().eval();
      return Body::ellipsoid(axes, rot, M * center);
    }
  }
  throw Error("unreachable");
}

JohnDecomposition john_ellipsoid(const Body& body) {
  const int n = body.dim();
  JohnDecomposition J;
  J.shrink_factor = 1.0 / n;

  auto finish = [&](EllipsoidData E) {
    // Detect rotational symmetry about the last coordinate axis: one frame
    // column is +-e_n and the remaining semi-axes agree.
    const int nn = static_cast<int>(E.semi_axes.size());
    int axis_col = -1;
    for (int c = 0; c < nn; ++c)
      if (E.rotation.col(c).head(nn - 1).norm() < 1e-8) axis_col = c;
    if (axis_col >= 0) {
      double s_eq = -1.0;
      bool equal = true;
      for (int c = 0; c < nn; ++c) {
        if (c == axis_col) continue;
        if (s_eq < 0.0)
          s_eq = E.semi_axes(c);
        else if (std::abs(E.semi_axes(c) - s_eq) > 1e-8 * s_eq)
          equal = false;
      }
      if (equal) {
        J.rotationally_symmetric = true;
        J.a = s_eq / E.semi_axes(axis_col);
        J.r = s_eq * std::pow(J.a, -1.0 / nn);
      }
    }
    J.ellipsoid = std::move(E);
    return J;
  };

  if (body.kind() == Body::Kind::ball) {
    const auto& B = body.ball_data();
    if (B.center.norm() > tol::kMembership * B.radius)
      throw DomainError("john_ellipsoid: body must be origin-symmetric");
    EllipsoidData E;
    E.semi_axes = Eigen::VectorXd::Constant(n, B.radius);
    E.rotation = Eigen::MatrixXd::Identity(n, n);
    E.center = Eigen::VectorXd::Zero(n);
    return finish(std::move(E));
  }
  if (body.kind() == Body::Kind::ellipsoid) {
    const auto& E = body.ellipsoid_data();
    if (E.center.norm() > tol::kMembership * E.semi_axes.maxCoeff())
      throw DomainError("john_ellipsoid: body must be origin-symmetric");
    EllipsoidData out = E;
    out.center.setZero();
    return finish(std::move(out));
  }

  const auto& P = body.poly();
  const int m = static_cast<int>(P.vertices.rows());
  const double scale = coord_scale(P.vertices);
  for (int i = 0; i < m; ++i) {
    bool found = false;
    for (int j = 0; j < m; ++j)
      if ((P.vertices.row(i) + P.vertices.row(j)).norm() <= 1e-8 * scale) {
        found = true;
        break;
      }
    if (!found) throw DomainError("john_ellipsoid: body must be origin-symmetric");
  }

  // Multiplicative updates for the minimum-volume centered enclosing
  // ellipsoid of the vertex set.
  Eigen::VectorXd lambda = Eigen::VectorXd::Constant(m, 1.0 / m);
  Eigen::MatrixXd Minv(n, n);
  double excess = 0.0;
  for (int it = 0; it < tol::kMveeMaxIter; ++it) {
    Eigen::MatrixXd Mmat = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < m; ++i)
      Mmat += lambda(i) * P.vertices.row(i).transpose() * P.vertices.row(i);
    Minv = Mmat.inverse();
    int worst = 0;
    double wmax = -1.0;
    for (int i = 0; i < m; ++i) {
      const double w = P.vertices.row(i) * Minv * P.vertices.row(i).transpose();
      if (w > wmax) wmax = w, worst = i;
    }
    excess = wmax / n - 1.0;
    if (excess <= tol::kMvee) break;
    const double beta = (wmax - n) / (n * (wmax - 1.0));
    lambda *= (1.0 - beta);
    lambda(worst) += beta;
  }
  Eigen::MatrixXd Mmat = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < m; ++i)
    Mmat += lambda(i) * P.vertices.row(i).transpose() * P.vertices.row(i);
  // Shape matrix of {x : x^T S^{-1} x <= 1}; inflate by the certified excess
  // so every vertex is inside even when the iteration stopped at the cap.
  Eigen::MatrixXd S = (1.0 + std::max(0.0, excess)) * static_cast<double>(n) * Mmat;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  EllipsoidData E;
  E.semi_axes = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  E.rotation = eig.eigenvectors();
  E.center = Eigen::VectorXd::Zero(n);
  return finish(std::move(E));
}

}  // namespace chords
