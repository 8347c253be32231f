#include "hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "chords/errors.hpp"

namespace chords::detail {

namespace {

double cross2(const Eigen::RowVector2d& o, const Eigen::RowVector2d& a,
              const Eigen::RowVector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<int> hull2d(const Eigen::MatrixXd& pts) {
  const int m = static_cast<int>(pts.rows());
  if (m < 3) throw DegeneracyError("hull2d: need at least 3 points");
  double scale = 0.0;
  for (int i = 0; i < m; ++i) scale = std::max(scale, pts.row(i).lpNorm<Eigen::Infinity>());
  const double eps = 1e-12 * std::max(1.0, scale * scale);

  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts(a, 0) != pts(b, 0)) return pts(a, 0) < pts(b, 0);
    return pts(a, 1) < pts(b, 1);
  });

  auto build = [&](const std::vector<int>& order) {
    std::vector<int> h;
    for (int i : order) {
      while (h.size() >= 2 &&
             cross2(pts.row(h[h.size() - 2]), pts.row(h.back()), pts.row(i)) <= eps)
        h.pop_back();
      h.push_back(i);
    }
    return h;
  };

  std::vector<int> lower = build(idx);
  std::reverse(idx.begin(), idx.end());
  std::vector<int> upper = build(idx);
  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  if (lower.size() < 3) throw DegeneracyError("hull2d: points are collinear");
  return lower;
}

std::vector<std::array<int, 3>> hull3d(const Eigen::MatrixXd& pts) {
  const int m = static_cast<int>(pts.rows());
  if (m < 4) throw DegeneracyError("hull3d: need at least 4 points");
  auto P = [&](int i) { return Eigen::Vector3d(pts(i, 0), pts(i, 1), pts(i, 2)); };
  double scale = 0.0;
  for (int i = 0; i < m; ++i) scale = std::max(scale, pts.row(i).lpNorm<Eigen::Infinity>());
  const double eps = 1e-10 * std::max(1.0, scale);

  // Initial simplex from extreme points.
  int i0 = 0;
  for (int i = 1; i < m; ++i)
    if (pts(i, 0) < pts(i0, 0)) i0 = i;
  int i1 = -1;
  double best = -1.0;
  for (int i = 0; i < m; ++i) {
    const double d = (P(i) - P(i0)).norm();
    if (d > best) best = d, i1 = i;
  }
  if (best <= eps) throw DegeneracyError("hull3d: all points coincide");
  const Eigen::Vector3d e = (P(i1) - P(i0)).normalized();
  int i2 = -1;
  best = -1.0;
  for (int i = 0; i < m; ++i) {
    const Eigen::Vector3d d = P(i) - P(i0);
    const double dist = (d - d.dot(e) * e).norm();
    if (dist > best) best = dist, i2 = i;
  }
  if (best <= eps) throw DegeneracyError("hull3d: points are collinear");
  const Eigen::Vector3d nrm0 = (P(i1) - P(i0)).cross(P(i2) - P(i0)).normalized();
  int i3 = -1;
  best = -1.0;
  for (int i = 0; i < m; ++i) {
    const double dist = std::abs((P(i) - P(i0)).dot(nrm0));
    if (dist > best) best = dist, i3 = i;
  }
  if (best <= eps) throw DegeneracyError("hull3d: points are coplanar");

  struct Face {
    std::array<int, 3> v;
    Eigen::Vector3d n;
    double off;
    bool alive = true;
  };
  std::vector<Face> faces;
  const Eigen::Vector3d inner = (P(i0) + P(i1) + P(i2) + P(i3)) / 4.0;

  auto add_face = [&](int a, int b, int c) {
    Face f;
    f.v = {a, b, c};
    f.n = (P(b) - P(a)).cross(P(c) - P(a));
    const double nn = f.n.norm();
    if (nn <= 0) throw DegeneracyError("hull3d: zero-area face");
    f.n /= nn;
    f.off = f.n.dot(P(a));
    if (f.n.dot(inner) > f.off) {  // flip to outward
      std::swap(f.v[1], f.v[2]);
      f.n = -f.n;
      f.off = -f.off;
    }
    faces.push_back(f);
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  auto edge_key = [](int a, int b) { return static_cast<long long>(a) * 1000003LL + b; };

  for (int p = 0; p < m; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
      if (faces[f].alive && faces[f].n.dot(P(p)) > faces[f].off + eps) visible.push_back(f);
    if (visible.empty()) continue;

    std::map<long long, int> edge_owner;  // directed edge -> alive face
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (!faces[f].alive) continue;
      const auto& v = faces[f].v;
      for (int k = 0; k < 3; ++k) edge_owner[edge_key(v[k], v[(k + 1) % 3])] = f;
    }
    std::vector<char> is_visible(faces.size(), 0);
    for (int f : visible) is_visible[f] = 1;
    std::vector<std::pair<int, int>> horizon;
    for (int f : visible) {
      const auto& v = faces[f].v;
      for (int k = 0; k < 3; ++k) {
        const int a = v[k], b = v[(k + 1) % 3];
        const auto it = edge_owner.find(edge_key(b, a));
        if (it == edge_owner.end() || !is_visible[it->second]) horizon.emplace_back(a, b);
      }
    }
    for (int f : visible) faces[f].alive = false;
    for (const auto& [a, b] : horizon) add_face(a, b, p);
  }

  std::vector<std::array<int, 3>> out;
  for (const auto& f : faces)
    if (f.alive) out.push_back(f.v);
  return out;
}

}  // namespace chords::detail
