#include "chords/grid.hpp"

#include <cmath>
#include <map>

#include "chords/constants.hpp"
#include "chords/errors.hpp"
#include "chords/omega.hpp"
#include "radial.hpp"

namespace chords {

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1], nodes ascending and exactly
// antisymmetric (second half mirrors the first with flipped sign).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& wts) {
  nodes.assign(n, 0.0);
  wts.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int k = 0; k < half; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    nodes[n - 1 - k] = x;
    wts[n - 1 - k] = w;
    nodes[k] = -x;
    wts[k] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

}  // namespace detail

namespace {

void finish_rings_and_orbits(SphericalGrid& g) {
  // Rings group directions by the last coordinate; orbits join each ring
  // with its antipodal ring (the unknowns of even zonal profiles).
  const int m = g.size();
  g.ring_id.assign(m, -1);
  g.rings.clear();
  std::map<long long, int> key_to_ring;
  for (int i = 0; i < m; ++i) {
    const double t = g.directions(i, g.dim - 1);
    const long long key = std::llround(t * 1e12);
    auto [it, inserted] = key_to_ring.try_emplace(key, static_cast<int>(g.rings.size()));
    if (inserted) g.rings.emplace_back();
    g.ring_id[i] = it->second;
    g.rings[it->second].push_back(i);
  }
  g.orbit_id.assign(m, -1);
  g.orbits.clear();
  std::map<int, int> ring_to_orbit;
  for (int i = 0; i < m; ++i) {
    const int r = g.ring_id[i];
    const int ra = g.ring_id[g.antipode[i]];
    const int rep = std::min(r, ra);
    auto [it, inserted] = ring_to_orbit.try_emplace(rep, static_cast<int>(g.orbits.size()));
    if (inserted) g.orbits.emplace_back();
    g.orbit_id[i] = it->second;
    g.orbits[it->second].push_back(i);
  }
}

}  // namespace

SphericalGrid SphericalGrid::circle(int count) {
  if (count < 4 || count % 4 != 0)
    throw RepresentationError("circle grid: count must be a positive multiple of 4");
  SphericalGrid g;
  g.dim = 2;
  g.zonal = true;
  g.directions.resize(count, 2);
  g.weights = Eigen::VectorXd::Constant(count, 2.0 * M_PI / count);
  const int half = count / 2;
  // First quarter by angle; second quarter mirrored in x so that the
  // reflection and antipodal symmetries hold exactly in floating point.
  for (int j = 0; j < count / 4; ++j) {
    const double phi = 2.0 * M_PI * (j + 0.5) / count;
    const double c = std::cos(phi), s = std::sin(phi);
    g.directions.row(j) << c, s;
    g.directions.row(half - 1 - j) << -c, s;
  }
  for (int j = 0; j < half; ++j) g.directions.row(half + j) = -g.directions.row(j);
  g.antipode.assign(count, -1);
  for (int j = 0; j < half; ++j) {
    g.antipode[j] = half + j;
    g.antipode[half + j] = j;
  }
  finish_rings_and_orbits(g);
  return g;
}

SphericalGrid SphericalGrid::zonal_rings(int n, int ring_count) {
  if (n == 2) {
    if (ring_count < 2 || ring_count % 2 != 0)
      throw RepresentationError("zonal grid: ring count must be even and >= 2");
    return circle(2 * ring_count);
  }
  if (n != 3) throw UnsupportedError("zonal grids exist for n = 2 and n = 3 only");
  if (ring_count < 2 || ring_count % 2 != 0)
    throw RepresentationError("zonal grid: ring count must be even and >= 2");

  std::vector<double> t, gw;
  detail::gauss_legendre(ring_count, t, gw);
  const int azim = std::max(4, 2 * ring_count - (2 * ring_count) % 4);  // multiple of 4
  std::vector<double> ca(azim), sa(azim);
  const int ahalf = azim / 2;
  for (int a = 0; a < azim / 4; ++a) {
    const double psi = 2.0 * M_PI * (a + 0.5) / azim;
    ca[a] = std::cos(psi);
    sa[a] = std::sin(psi);
    ca[ahalf - 1 - a] = -ca[a];
    sa[ahalf - 1 - a] = sa[a];
  }
  for (int a = 0; a < ahalf; ++a) {
    ca[ahalf + a] = -ca[a];
    sa[ahalf + a] = -sa[a];
  }

  SphericalGrid g;
  g.dim = 3;
  g.zonal = true;
  const int m = ring_count * azim;
  g.directions.resize(m, 3);
  g.weights.resize(m);
  // Shared sin(theta) per mirrored ring pair keeps antipodes exact.
  std::vector<double> st(ring_count);
  for (int k = 0; k < ring_count / 2; ++k) {
    st[k] = std::sqrt(std::max(0.0, 1.0 - t[k] * t[k]));
    st[ring_count - 1 - k] = st[k];
  }
  for (int k = 0; k < ring_count; ++k) {
    for (int a = 0; a < azim; ++a) {
      const int i = k * azim + a;
      g.directions.row(i) << st[k] * ca[a], st[k] * sa[a], t[k];
      g.weights(i) = 2.0 * M_PI * gw[k] / azim;
    }
  }
  g.antipode.assign(m, -1);
  for (int k = 0; k < ring_count; ++k) {
    const int km = ring_count - 1 - k;
    for (int a = 0; a < azim; ++a) {
      const int am = (a + ahalf) % azim;
      g.antipode[k * azim + a] = km * azim + am;
    }
  }
  finish_rings_and_orbits(g);
  return g;
}

SphericalGrid SphericalGrid::explicit_grid(Eigen::MatrixXd directions, Eigen::VectorXd weights,
                                           bool zonal_flag) {
  SphericalGrid g;
  g.dim = static_cast<int>(directions.cols());
  g.directions = std::move(directions);
  g.weights = std::move(weights);
  g.zonal = zonal_flag;
  const int m = g.size();
  if (g.weights.size() != m)
    throw RepresentationError("explicit grid: weights/directions size mismatch");
  g.antipode.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    if (g.antipode[i] >= 0) continue;
    int match = -1;
    for (int j = 0; j < m; ++j) {
      if ((g.directions.row(i) + g.directions.row(j)).norm() <= tol::kUnitVector) {
        match = j;
        break;
      }
    }
    if (match < 0) throw RepresentationError("explicit grid: missing antipodal partner");
    g.antipode[i] = match;
    g.antipode[match] = i;
  }
  if (g.zonal) finish_rings_and_orbits(g);
  return g;
}

void SphericalGrid::validate() const {
  const int m = size();
  if (m == 0 || dim < 2) throw RepresentationError("grid: empty or dimension < 2");
  for (int i = 0; i < m; ++i) {
    if (std::abs(directions.row(i).norm() - 1.0) > tol::kUnitVector)
      throw RepresentationError("grid: direction is not a unit vector");
    if (!(weights(i) > 0.0)) throw RepresentationError("grid: weights must be positive");
    const int a = antipode.at(i);
    if (a < 0 || a >= m || antipode.at(a) != i ||
        (directions.row(i) + directions.row(a)).norm() > tol::kUnitVector)
      throw RepresentationError("grid: broken antipodal pairing");
    if (std::abs(weights(i) - weights(a)) > tol::kAntipodal * weights(i))
      throw RepresentationError("grid: antipodal weights differ");
  }
  const double mass = weights.sum();
  const double want = dim * unit_ball_volume(dim);
  if (std::abs(mass - want) > tol::kGridMass * want)
    throw RepresentationError("grid: total weight does not match the sphere area");
  if (zonal) {
    for (const auto& ring : rings) {
      const double t0 = directions(ring.front(), dim - 1);
      for (int i : ring)
        if (std::abs(directions(i, dim - 1) - t0) > 1e-12)
          throw RepresentationError("grid: ring is not at constant height");
    }
  }
}

void SupportVector::validate() const {
  if (!grid) throw RepresentationError("support vector: missing grid");
  if (values.size() != grid->size())
    throw RepresentationError("support vector: value count does not match grid");
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!(values(i) > 0.0) || !std::isfinite(values(i)))
      throw RepresentationError("support vector: values must be finite and positive");
}

}  // namespace chords
