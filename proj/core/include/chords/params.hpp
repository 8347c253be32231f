#pragma once

#include <string>
#include <vector>

namespace chords {

// Parameter block for the stretched-solution construction and the
// variational solver. The admissible ranges encode when the weighted
// density is integrable and when the chord integral of the stretched
// family decays to zero.
struct ProblemParams {
  int n = 2;
  double p = -1.0;       // L_p exponent, negative throughout
  double q = 2.5;        // chord-integral order, 0 < q <= n+1
  double alpha = 0.5;    // equatorial density exponent |x'|^alpha
  double beta = 0.5;     // axial density exponent |x_n|^beta
  double gamma = -0.7;   // stretch coupling exponent
  double epsilon = 0.1;  // anisotropy parameter in (0, 1/2]

  // Lower bounds the density exponents must exceed for a solvable problem.
  double alpha_floor() const;  // max{1-n, 1-n + (2-n-q) p / (n+q-1)}
  double beta_floor() const;   // max{-1, -1 - p / (n+q-1)}

  // Admissible gamma window (-1, -2p/(n+q-1) - 1): exactly the gammas whose
  // decay exponent below is positive when q > 2.
  double gamma_window_min() const { return -1.0; }
  double gamma_window_max() const;
  // Midpoint of the window, the maximal-margin default.
  double gamma_default() const;

  // Exponent theta of the dilation in the stretched solution
  // epsilon^theta * M^{-1} K: (n - p - 4 - gamma + q) / (n - p + q - 1).
  double stretch_exponent() const;

  // Exponent of the chord-integral decay bound. For q != 2 the bound is
  // epsilon^exponent; at q = 2 an extra |log epsilon| factor applies.
  double decay_exponent() const;
  double decay_bound(double eps) const;

  // Hard constraints: basic ranges plus the alpha/beta floors.
  // Throws ConfigError with the violated constraint spelled out.
  void validate() const;

  // Additional hard constraints for the stretched-solution pipeline:
  // 2 < q <= n+1, alpha, beta >= 0, gamma inside the decay window.
  void validate_for_construction() const;

  // Non-fatal flags: conditions outside the tighter exponent ranges under
  // which the density's two-sided bounds degrade but the pipeline still runs.
  std::vector<std::string> construction_warnings() const;
};

}  // namespace chords
