#include "chords/omega.hpp"

#include <cmath>

#include "chords/errors.hpp"

namespace chords {

double unit_ball_volume(double s) {
  if (s < 0.0 || !std::isfinite(s)) throw DomainError("unit_ball_volume: s must be finite and >= 0");
  // lgamma keeps intermediate magnitudes sane for larger s.
  return std::exp(0.5 * s * std::log(M_PI) - std::lgamma(1.0 + 0.5 * s));
}

double ball_chord_integral(int n, double q) {
  if (n < 1) throw DomainError("ball_chord_integral: dimension must be >= 1");
  if (q < 0.0 || !std::isfinite(q)) throw DomainError("ball_chord_integral: q must be finite and >= 0");
  return std::pow(2.0, q) * unit_ball_volume(n + q - 1.0) / unit_ball_volume(q);
}

}  // namespace chords
