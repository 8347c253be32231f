#include "chords/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "chords/constants.hpp"
#include "chords/errors.hpp"
#include "chords/omega.hpp"
#include "chords/rng.hpp"
#include "radial.hpp"

namespace chords {

namespace detail {

double polygon_radial_integral(const PolytopeData& P, const Eigen::Vector2d& z, double power,
                               int nodes_per_arc, const RadialWeight* weight,
                               const std::vector<double>* extra_breakpoints) {
  const double scale = std::max(1.0, P.offsets.cwiseAbs().maxCoeff());
  std::vector<double> br;
  br.reserve(P.vertices.rows() + (extra_breakpoints ? extra_breakpoints->size() : 0));
  for (Eigen::Index i = 0; i < P.vertices.rows(); ++i) {
    const Eigen::Vector2d d = P.vertices.row(i).transpose() - z;
    if (d.norm() > 1e-12 * scale) br.push_back(std::atan2(d.y(), d.x()));
  }
  if (extra_breakpoints)
    for (double a : *extra_breakpoints) br.push_back(std::remainder(a, 2.0 * M_PI));
  std::sort(br.begin(), br.end());
  if (br.empty()) throw DegeneracyError("radial integral: no usable arc breakpoints");

  std::vector<double> gx, gw;
  gauss_legendre(nodes_per_arc, gx, gw);

  double total = 0.0;
  const int B = static_cast<int>(br.size());
  for (int k = 0; k < B; ++k) {
    const double a = br[k];
    const double b = (k + 1 < B) ? br[k + 1] : br[0] + 2.0 * M_PI;
    if (b - a < 1e-13) continue;
    const double mid = 0.5 * (a + b);
    const Eigen::Vector2d um(std::cos(mid), std::sin(mid));
    // Exit edge is constant on the open arc: pick it at the midpoint.
    int edge = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index f = 0; f < P.normals.rows(); ++f) {
      const double den = P.normals.row(f).dot(um);
      if (den <= tol::kRay) continue;
      const double t = (P.offsets(f) - P.normals.row(f).dot(z)) / den;
      if (t < best) best = t, edge = static_cast<int>(f);
    }
    if (edge < 0) throw DegeneracyError("radial integral: unbounded ray");
    const double be = P.offsets(edge) - P.normals.row(edge).dot(z);
    if (be <= tol::kBoundaryRho * scale) continue;  // base point on this edge: rho = 0 arc
    const double psi = std::atan2(P.normals(edge, 1), P.normals(edge, 0));
    const double half = 0.5 * (b - a);
    double arc = 0.0;
    for (int j = 0; j < nodes_per_arc; ++j) {
      const double theta = mid + half * gx[j];
      const double rho = be / std::cos(theta - psi);
      double v = std::pow(rho, power);
      if (weight && *weight) {
        Eigen::VectorXd u(2);
        u << std::cos(theta), std::sin(theta);
        v *= (*weight)(u, rho);
      }
      arc += gw[j] * v;
    }
    total += arc * half;
  }
  return total;
}

double grid_radial_integral(const Body& body, const Eigen::VectorXd& z, double power,
                            const SphericalGrid& grid, const RadialWeight* weight) {
  double total = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd u = grid.directions.row(i);
    const double rho = radial_eval(body, z, u);
    if (rho <= tol::kBoundaryRho) continue;
    double v = std::pow(rho, power);
    if (weight && *weight) v *= (*weight)(u, rho);
    total += grid.weights(i) * v;
  }
  return total;
}

}  // namespace detail

namespace {

// Fixed-size chunks merged in index order: results are bit-identical for any
// thread count.
constexpr std::uint64_t kChunk = 8192;

template <typename Fn>
void run_chunks(std::uint64_t n, int threads, std::vector<std::array<double, 2>>& sums, Fn fn) {
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  sums.assign(chunks, {0.0, 0.0});
  const int T = std::max(1, threads);
  if (T == 1 || chunks <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c)
      fn(c, c * kChunk, std::min(n, (c + 1) * kChunk), sums[c]);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(T);
  for (int t = 0; t < T; ++t)
    pool.emplace_back([&, t]() {
      for (std::uint64_t c = t; c < chunks; c += T)
        fn(c, c * kChunk, std::min(n, (c + 1) * kChunk), sums[c]);
    });
  for (auto& th : pool) th.join();
}

// Flip u to the canonical representative of {u, -u}: last nonzero coordinate
// positive. X-rays are even in the direction, so this is free symmetry
// reduction — and it makes the estimator exactly invariant under antipodal
// re-seeding.
void canonicalize_sign(Eigen::VectorXd& u) {
  for (Eigen::Index k = u.size() - 1; k >= 0; --k) {
    if (u(k) > 0.0) return;
    if (u(k) < 0.0) {
      u = -u;
      return;
    }
  }
}

double cover_radius(const Body& body, const Eigen::VectorXd& center) {
  switch (body.kind()) {
    case Body::Kind::hpolytope:
    case Body::Kind::vpolytope: {
      const auto& P = body.poly();
      double r = 0.0;
      for (Eigen::Index i = 0; i < P.vertices.rows(); ++i)
        r = std::max(r, (P.vertices.row(i).transpose() - center).norm());
      return r;
    }
    case Body::Kind::ball:
      return (body.ball_data().center - center).norm() + body.ball_data().radius;
    case Body::Kind::ellipsoid:
      return (body.ellipsoid_data().center - center).norm() +
             body.ellipsoid_data().semi_axes.maxCoeff();
  }
  throw Error("unreachable");
}

struct LineFrame {
  Eigen::VectorXd center;
  double radius = 0.0;
};

LineFrame resolve_frame(const Body& body, const LineSamplerConfig& cfg) {
  LineFrame fr;
  fr.center = cfg.center ? *cfg.center : volume_and_facet_data(body).centroid;
  const double need = cover_radius(body, fr.center);
  fr.radius = cfg.bounding_radius > 0.0 ? cfg.bounding_radius : need;
  if (fr.radius < need * (1.0 - 1e-9))
    throw DomainError("line sampler: bounding radius smaller than the body cover radius");
  return fr;
}

Eigen::VectorXd sample_direction(const CounterRng& rng, std::uint64_t base, int n, bool flip) {
  Eigen::VectorXd u(n);
  if (n == 2) {
    const double phi = 2.0 * M_PI * rng.u01(base);
    u << std::cos(phi), std::sin(phi);
  } else {
    const double zc = rng.symmetric(base);
    const double phi = 2.0 * M_PI * rng.u01(base + 1);
    const double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    u << r * std::cos(phi), r * std::sin(phi), zc;
  }
  if (flip) u = -u;
  canonicalize_sign(u);
  return u;
}

Eigen::VectorXd sample_offset(const CounterRng& rng, std::uint64_t base, const Eigen::VectorXd& u,
                              const LineFrame& fr) {
  const int n = static_cast<int>(u.size());
  if (n == 2) {
    const double t = fr.radius * rng.symmetric(base + 2);
    Eigen::VectorXd w(2);
    w << -u(1), u(0);
    return fr.center + t * w;
  }
  const double rr = fr.radius * std::sqrt(rng.u01(base + 2));
  const double psi = 2.0 * M_PI * rng.u01(base + 3);
  const Eigen::Vector3d u3 = u;
  const Eigen::Vector3d b1 = u3.unitOrthogonal();
  const Eigen::Vector3d b2 = u3.cross(b1);
  return fr.center + rr * (std::cos(psi) * b1 + std::sin(psi) * b2);
}

Estimate finish_mc(double factor, const std::vector<std::array<double, 2>>& sums, std::uint64_t n,
                   std::uint64_t seed, Method method) {
  double s1 = 0.0, s2 = 0.0;
  for (const auto& s : sums) {
    s1 += s[0];
    s2 += s[1];
  }
  const double mean = s1 / static_cast<double>(n);
  const double var = std::max(0.0, s2 / static_cast<double>(n) - mean * mean);
  Estimate e;
  e.value = factor * mean;
  e.std_error = factor * std::sqrt(var / std::max<std::uint64_t>(1, n - 1));
  e.n_samples = n;
  e.seed = seed;
  e.method = method;
  return e;
}

// Shared deterministic facet quadrature: calls fn(point, node_weight) for
// every boundary node of the facet, where node weights sum to the facet area.
template <typename Fn>
void for_each_facet_node(const PolytopeData& P, int facet, int nodes, Fn fn) {
  const auto& fv = P.facet_vertices[facet];
  if (P.vertices.cols() == 2) {
    const Eigen::Vector2d a = P.vertices.row(fv[0]);
    const Eigen::Vector2d b = P.vertices.row(fv[1]);
    const double len = (b - a).norm();
    for (int j = 0; j < nodes; ++j) {
      const double t = (j + 0.5) / nodes;
      fn(Eigen::VectorXd(a + t * (b - a)), len / nodes);
    }
    return;
  }
  // Fan triangulation, then m^2 equal-area midpoint subtriangles per triangle.
  const Eigen::Vector3d v0 = P.vertices.row(fv[0]);
  for (std::size_t k = 1; k + 1 < fv.size(); ++k) {
    const Eigen::Vector3d va = P.vertices.row(fv[k]);
    const Eigen::Vector3d vb = P.vertices.row(fv[k + 1]);
    const double area = 0.5 * (va - v0).cross(vb - v0).norm();
    if (area <= tol::kDegeneracy) continue;
    const double w = area / (nodes * nodes);
    const Eigen::Vector3d e1 = (va - v0) / nodes, e2 = (vb - v0) / nodes;
    for (int i = 0; i < nodes; ++i)
      for (int j = 0; j < nodes - i; ++j) {
        fn(Eigen::VectorXd(v0 + (i + 1.0 / 3.0) * e1 + (j + 1.0 / 3.0) * e2), w);
        if (i + j < nodes - 1)
          fn(Eigen::VectorXd(v0 + (i + 2.0 / 3.0) * e1 + (j + 2.0 / 3.0) * e2), w);
      }
  }
}

// Rotation taking e_n to `axis` (n = 2 or 3); used to align the zonal grid
// pole with a facet normal so the rho > 0 hemisphere is resolved exactly.
Eigen::MatrixXd rotation_to_axis(const Eigen::VectorXd& axis) {
  const int n = static_cast<int>(axis.size());
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
  if (n == 2) {
    Q << axis(1), axis(0), -axis(0), axis(1);  // maps e_2 to axis
    return Q;
  }
  const Eigen::Vector3d a = axis;
  const Eigen::Vector3d b1 = a.unitOrthogonal();
  const Eigen::Vector3d b2 = a.cross(b1);
  Q.col(0) = b1;
  Q.col(1) = b2;
  Q.col(2) = a;
  return Q;
}

double dual_quermass_value(const Body& body, const Eigen::VectorXd& z, double q,
                           const Resolution& res, const SphericalGrid* grid3,
                           std::uint64_t* nodes_out) {
  const int n = body.dim();
  if (n == 2 && body.is_polytope()) {
    const auto& P = body.poly();
    if (nodes_out) *nodes_out = static_cast<std::uint64_t>(P.vertices.rows()) * res.arc_nodes;
    return detail::polygon_radial_integral(P, Eigen::Vector2d(z), q, res.arc_nodes) / n;
  }
  if (n == 2) {
    const SphericalGrid g = SphericalGrid::circle(2048);
    if (nodes_out) *nodes_out = g.size();
    return detail::grid_radial_integral(body, z, q, g) / n;
  }
  if (n == 3) {
    if (grid3) {
      if (nodes_out) *nodes_out = grid3->size();
      return detail::grid_radial_integral(body, z, q, *grid3) / n;
    }
    const SphericalGrid g = SphericalGrid::zonal_rings(3, res.rings);
    if (nodes_out) *nodes_out = g.size();
    return detail::grid_radial_integral(body, z, q, g) / n;
  }
  // Higher dimensions: balls centered at z only.
  if (body.kind() == Body::Kind::ball) {
    const auto& B = body.ball_data();
    if ((z - B.center).norm() <= tol::kMembership * B.radius) {
      if (nodes_out) *nodes_out = 1;
      return std::pow(B.radius, q) * unit_ball_volume(n);
    }
  }
  throw UnsupportedError("dual quermassintegral: dimension > 3 supported for centered balls only");
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::crofton_mc: return "crofton-mc";
    case Method::boundary: return "boundary";
    case Method::radial_quadrature: return "radial-quadrature";
    case Method::riesz_mc: return "riesz-mc";
    case Method::closed_form: return "closed-form";
  }
  throw Error("unreachable");
}

Method method_from_name(const std::string& s) {
  if (s == "crofton-mc") return Method::crofton_mc;
  if (s == "boundary") return Method::boundary;
  if (s == "radial-quadrature") return Method::radial_quadrature;
  if (s == "riesz-mc") return Method::riesz_mc;
  if (s == "closed-form") return Method::closed_form;
  throw ConfigError("unknown method name: " + s);
}

void DiscreteMeasure::validate() const {
  if (directions.rows() != weights.size())
    throw RepresentationError("measure: directions/weights size mismatch");
  for (Eigen::Index i = 0; i < directions.rows(); ++i) {
    if (std::abs(directions.row(i).norm() - 1.0) > tol::kUnitVector)
      throw RepresentationError("measure: directions must be unit vectors");
    if (!(weights(i) >= 0.0) || !std::isfinite(weights(i)))
      throw RepresentationError("measure: weights must be finite and nonnegative");
  }
}

Estimate dual_quermass(const Body& body, const Eigen::VectorXd& z, double q, Method method,
                       const Resolution& res, const LineSamplerConfig& mc) {
  if (!(q > 0.0)) throw DomainError("dual quermassintegral: q must be positive");
  if (!contains(body, z)) throw DomainError("dual quermassintegral: base point outside the body");
  const int n = body.dim();

  if (method == Method::radial_quadrature) {
    Estimate e;
    e.method = Method::radial_quadrature;
    e.value = dual_quermass_value(body, z, q, res, nullptr, &e.n_samples);
    return e;
  }
  if (method != Method::riesz_mc)
    throw ConfigError("dual quermassintegral: method must be radial-quadrature or riesz-mc");

  // Uniform samples in K by rejection from the bounding box; the value is
  // (q/n) Vol(K) E|x - z|^{q-n}.
  Eigen::VectorXd lo(n), hi(n);
  if (body.is_polytope()) {
    lo = body.poly().vertices.colwise().minCoeff();
    hi = body.poly().vertices.colwise().maxCoeff();
  } else {
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e(k) = 1.0;
      hi(k) = support_eval(body, e);
      lo(k) = -support_eval(body, -e);
    }
  }
  const double vol = volume_and_facet_data(body).volume;
  const CounterRng rng(mc.seed, /*stream=*/1);
  constexpr std::uint64_t kAttempts = 512;
  std::vector<std::array<double, 2>> sums;
  run_chunks(mc.n_samples, mc.threads, sums,
             [&](std::uint64_t, std::uint64_t b, std::uint64_t e, std::array<double, 2>& acc) {
               Eigen::VectorXd x(n);
               for (std::uint64_t s = b; s < e; ++s) {
                 const std::uint64_t base = s * kAttempts * n;
                 double v = 0.0;
                 for (std::uint64_t t = 0; t < kAttempts; ++t) {
                   for (int k = 0; k < n; ++k)
                     x(k) = lo(k) + (hi(k) - lo(k)) * rng.u01(base + t * n + k);
                   if (!contains(body, x)) continue;
                   const double d = (x - z).norm();
                   if (d < 1e-12) continue;
                   v = std::pow(d, q - n);
                   break;
                 }
                 acc[0] += v;
                 acc[1] += v * v;
               }
             });
  return finish_mc(q * vol / n, sums, mc.n_samples, mc.seed, Method::riesz_mc);
}

Estimate chord_integral_crofton(const Body& body, double q, const LineSamplerConfig& cfg) {
  if (!(q >= 0.0)) throw DomainError("chord integral: q must be nonnegative");
  const int n = body.dim();
  if (n != 2 && n != 3) throw UnsupportedError("chord integral sampling supports n = 2, 3");
  const LineFrame fr = resolve_frame(body, cfg);
  const CounterRng rng(cfg.seed, /*stream=*/0);
  std::vector<std::array<double, 2>> sums;
  run_chunks(cfg.n_samples, cfg.threads, sums,
             [&](std::uint64_t, std::uint64_t b, std::uint64_t e, std::array<double, 2>& acc) {
               for (std::uint64_t s = b; s < e; ++s) {
                 const std::uint64_t base = s * 8;
                 const Eigen::VectorXd u = sample_direction(rng, base, n, cfg.antipodal_flip);
                 const Eigen::VectorXd x = sample_offset(rng, base, u, fr);
                 const double X = xray(body, x, u);
                 const double v = X > 0.0 ? std::pow(X, q) : 0.0;
                 acc[0] += v;
                 acc[1] += v * v;
               }
             });
  const double factor = unit_ball_volume(n - 1) * std::pow(fr.radius, n - 1);
  return finish_mc(factor, sums, cfg.n_samples, cfg.seed, Method::crofton_mc);
}

DiscreteMeasure chord_measure_polytope(const Body& body, double q, const Resolution& res) {
  if (!(q > 0.0)) throw DomainError("chord measure: q must be positive");
  if (!body.is_polytope()) throw UnsupportedError("chord measure: polytopes only");
  const auto& P = body.poly();
  const int n = body.dim();
  const int F = static_cast<int>(P.normals.rows());
  DiscreteMeasure out;
  out.directions = P.normals;
  out.weights = Eigen::VectorXd::Zero(F);
  const double front = 2.0 * q / unit_ball_volume(n);

  // 3D: per facet align the quadrature pole with the facet normal, so the
  // inward hemisphere (rho > 0) is sampled without straddling the equator.
  SphericalGrid base3;
  if (n == 3) base3 = SphericalGrid::zonal_rings(3, res.rings);

  for (int f = 0; f < F; ++f) {
    if (P.facet_areas(f) <= tol::kDegeneracy) continue;
    SphericalGrid aligned;
    const SphericalGrid* g3 = nullptr;
    if (n == 3) {
      const Eigen::MatrixXd Q = rotation_to_axis(P.normals.row(f).transpose());
      aligned = SphericalGrid::explicit_grid(base3.directions * Q.transpose(), base3.weights);
      g3 = &aligned;
    }
    double acc = 0.0;
    for_each_facet_node(P, f, res.facet_nodes, [&](const Eigen::VectorXd& zpt, double w) {
      acc += w * dual_quermass_value(body, zpt, q - 1.0, res, g3, nullptr);
    });
    out.weights(f) = front * acc;
  }
  return out;
}

Estimate chord_integral_boundary(const Body& body, double q, const Resolution& res) {
  if (!(q > 0.0)) throw DomainError("chord integral: q must be positive");
  if (!body.is_polytope()) throw UnsupportedError("boundary chord integral: polytopes only");
  const auto& P = body.poly();
  if (P.offsets.minCoeff() <= 0.0)
    throw DomainError("boundary chord integral: origin must be interior");
  const DiscreteMeasure F = chord_measure_polytope(body, q, res);
  Estimate e;
  e.method = Method::boundary;
  e.value = P.offsets.dot(F.weights) / (body.dim() + q - 1.0);
  e.n_samples = static_cast<std::uint64_t>(F.weights.size()) * res.facet_nodes;
  return e;
}

DiscreteMeasure lp_chord_measure(const Body& body, double p, double q, const Resolution& res) {
  if (!body.is_polytope()) throw UnsupportedError("L_p chord measure: polytopes only");
  const auto& P = body.poly();
  if (P.offsets.minCoeff() <= 0.0)
    throw DomainError("L_p chord measure: origin must be interior (h > 0)");
  DiscreteMeasure out = chord_measure_polytope(body, q, res);
  for (Eigen::Index f = 0; f < out.weights.size(); ++f)
    out.weights(f) *= std::pow(P.offsets(f), 1.0 - p);
  return out;
}

double ellipsoid_chord_bound(const EllipsoidData& E, double q) {
  const int n = static_cast<int>(E.semi_axes.size());
  const Eigen::VectorXd& a = E.semi_axes;
  if (a(n - 1) > 1.0 + 1e-12)
    throw DomainError("ellipsoid chord bound: semi-axes must satisfy a_n <= 1");
  const double qr = std::round(q);
  if (std::abs(q - qr) < 1e-12) {
    // Integer order: route through the moment interpolation inequality with
    // s = q + 1/2, using the closed-form volume of the ellipsoid.
    const int r = static_cast<int>(qr);
    if (r < 1 || r > n) throw DomainError("ellipsoid chord bound: integer q must be in [1, n]");
    if (r == 1) return unit_ball_volume(n) * a.prod();  // I_1 = V exactly
    const double s = q + 0.5;
    const double t = (q - 1.0) / (s - 1.0);
    const double V = unit_ball_volume(n) * a.prod();
    return q * std::pow(s, -t) * std::pow(V, 1.0 - t) * std::pow(ellipsoid_chord_bound(E, s), t);
  }
  if (!(q > 1.0 && q < n + 1.0))
    throw DomainError("ellipsoid chord bound: q must lie in (1, n+1)");
  const int m = static_cast<int>(std::floor(q));
  const double wn = unit_ball_volume(n);
  double c;
  if (m == n) {
    c = std::pow(2.0, q - n + 2.0) * q * (q - 1.0) * std::pow(unit_ball_volume(n - 1), 2) /
        ((q - n) * (q - n + 1.0) * n * wn);
  } else {
    c = std::pow(2.0, n - m + 3.0) * q * (q - 1.0) * (n - m) *
        std::pow(unit_ball_volume(m - 1), 2) * std::pow(unit_ball_volume(n - m), 2) /
        ((m + 1.0 - q) * (q - m) * (q - m + 1.0) * n * wn);
  }
  double prod = 1.0;
  for (int i = 0; i < m; ++i) prod *= a(i) * a(i);
  prod *= std::pow(a(m - 1), q - m - 1.0);
  for (int i = m; i < n; ++i) prod *= a(i);
  return c * prod;
}

InterpolationCheck interpolation_bound_check(const Body& body, double r, double s,
                                             const LineSamplerConfig& cfg) {
  if (!(r >= 1.0 && s > r)) throw DomainError("interpolation check: need 1 <= r < s");
  LineSamplerConfig shared = cfg;
  const LineFrame fr = resolve_frame(body, cfg);
  shared.center = fr.center;
  shared.bounding_radius = fr.radius;
  const Estimate Ir = chord_integral_crofton(body, r, shared);
  const Estimate Is = chord_integral_crofton(body, s, shared);
  const double V = volume_and_facet_data(body).volume;
  const double t = (r - 1.0) / (s - 1.0);
  InterpolationCheck out;
  out.lhs = Ir.value;
  out.rhs = r * std::pow(s, -t) * std::pow(V, 1.0 - t) * std::pow(Is.value, t);
  const double drhs = Is.value > 0.0 ? out.rhs * t / Is.value : 0.0;
  out.sigma = std::hypot(Ir.std_error, drhs * Is.std_error);
  out.holds = out.lhs <= out.rhs + 3.0 * out.sigma;
  return out;
}

Eigen::VectorXd chord_measure_on_grid(const SupportVector& h, double q, const Resolution& res) {
  const WulffResult W = wulff_shape(h);
  const DiscreteMeasure F = chord_measure_polytope(W.body, q, res);
  const auto& g = *h.grid;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.size());
  for (Eigen::Index f = 0; f < F.directions.rows(); ++f) {
    int best = -1;
    double bd = -2.0;
    for (int j = 0; j < g.size(); ++j) {
      const double d = F.directions.row(f).dot(g.directions.row(j));
      if (d > bd) bd = d, best = j;
    }
    if (bd < 1.0 - 1e-10)
      throw DegeneracyError("chord measure: facet normal does not match any grid direction");
    out(best) += F.weights(f);
  }
  return out;
}

VariationCheck first_variation_check(const SupportVector& h, const Eigen::VectorXd& g, double q,
                                     double step, const LineSamplerConfig& cfg,
                                     const Resolution& res) {
  h.validate();
  if (g.size() != h.values.size()) throw DomainError("first variation: g has wrong size");
  if (!(step > 0.0)) throw DomainError("first variation: step must be positive");
  SupportVector hp{h.grid, h.values + step * g};
  SupportVector hm{h.grid, h.values - step * g};
  if (hp.values.minCoeff() <= 0.0 || hm.values.minCoeff() <= 0.0)
    throw DomainError("first variation: step leaves the positive cone");

  const WulffResult W0 = wulff_shape(h);
  const WulffResult Wp = wulff_shape(hp);
  const WulffResult Wm = wulff_shape(hm);
  VariationCheck out;
  out.facet_set_changed = (Wp.active != Wm.active);

  const Eigen::VectorXd Fq = chord_measure_on_grid(h, q, res);
  out.measure_pairing = g.dot(Fq);

  // One shared line frame covering both perturbed bodies.
  LineSamplerConfig shared = cfg;
  const Eigen::VectorXd center = volume_and_facet_data(W0.body).centroid;
  shared.center = center;
  shared.bounding_radius =
      std::max(cover_radius(Wp.body, center), cover_radius(Wm.body, center));
  const Estimate Ip = chord_integral_crofton(Wp.body, q, shared);
  const Estimate Im = chord_integral_crofton(Wm.body, q, shared);
  out.fd = (Ip.value - Im.value) / (2.0 * step);
  out.rel_err = std::abs(out.fd - out.measure_pairing) /
                std::max(1e-300, std::abs(out.measure_pairing));
  return out;
}

}  // namespace chords
