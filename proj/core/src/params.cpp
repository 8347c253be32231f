#include "chords/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chords/errors.hpp"

namespace chords {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

double ProblemParams::alpha_floor() const {
  const double base = 1.0 - n;
  return std::max(base, base + (2.0 - n - q) * p / (n + q - 1.0));
}

double ProblemParams::beta_floor() const {
  return std::max(-1.0, -1.0 - p / (n + q - 1.0));
}

double ProblemParams::gamma_window_max() const { return -2.0 * p / (n + q - 1.0) - 1.0; }

double ProblemParams::gamma_default() const {
  return 0.5 * (gamma_window_min() + gamma_window_max());
}

double ProblemParams::stretch_exponent() const {
  return (n - p - 4.0 - gamma + q) / (n - p + q - 1.0);
}

double ProblemParams::decay_exponent() const {
  if (q >= 2.0) return 2.0 - (3.0 + gamma) * (q + n - 1.0) / (n - p + q - 1.0);
  return q - (3.0 + gamma) * (q + n - 1.0) / (n - p + q - 1.0);
}

double ProblemParams::decay_bound(double eps) const {
  if (!(eps > 0.0) || !(eps < 1.0)) throw DomainError("decay_bound: eps must lie in (0, 1)");
  double b = std::pow(eps, decay_exponent());
  if (q == 2.0) b *= std::abs(std::log(eps));
  return b;
}

void ProblemParams::validate() const {
  if (n < 2) throw ConfigError("params: n must be >= 2");
  if (!(p < 0.0)) throw ConfigError("params: p must be negative, got " + fmt(p));
  if (!(q > 0.0) || !(q <= n + 1.0)) {
    throw ConfigError("params: q must lie in (0, n+1], got " + fmt(q));
  }
  if (!(epsilon > 0.0) || !(epsilon <= 0.5)) {
    throw ConfigError("params: epsilon must lie in (0, 1/2], got " + fmt(epsilon));
  }
  if (!(alpha > alpha_floor())) {
    throw ConfigError("params: alpha must exceed max{1-n, 1-n+(2-n-q)p/(n+q-1)} = " +
                      fmt(alpha_floor()) + ", got " + fmt(alpha));
  }
  if (!(beta > beta_floor())) {
    throw ConfigError("params: beta must exceed max{-1, -1-p/(n+q-1)} = " + fmt(beta_floor()) +
                      ", got " + fmt(beta));
  }
}

void ProblemParams::validate_for_construction() const {
  validate();
  if (!(q > 2.0)) {
    throw ConfigError("params: the stretched-solution pipeline needs q > 2, got " + fmt(q));
  }
  if (alpha < 0.0 || beta < 0.0) {
    throw ConfigError("params: the construction density needs alpha, beta >= 0");
  }
  if (!(gamma > gamma_window_min()) || !(gamma < gamma_window_max())) {
    throw ConfigError("params: gamma must lie in (" + fmt(gamma_window_min()) + ", " +
                      fmt(gamma_window_max()) + ") so the chord integral decays; got " +
                      fmt(gamma));
  }
}

std::vector<std::string> ProblemParams::construction_warnings() const {
  std::vector<std::string> out;
  // Tighter window under which the density admits clean two-sided bounds;
  // outside it the decay statement still holds but constants degrade.
  const double tight_max = -1.0 - p / (n + q - 1.0);
  if (!(gamma < tight_max)) {
    out.push_back("gamma = " + fmt(gamma) + " is above -1-p/(n+q-1) = " + fmt(tight_max) +
                  "; density bounds lose uniformity (decay window still satisfied)");
  }
  if (q == 2.0) {
    out.push_back("q = 2: decay bound carries an extra |log eps| factor");
  }
  return out;
}

}  // namespace chords
