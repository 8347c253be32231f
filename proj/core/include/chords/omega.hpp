#pragma once

namespace chords {

// Volume of the unit ball in dimension s, extended to real s >= 0 through the
// Gamma function: pi^{s/2} / Gamma(1 + s/2).
double unit_ball_volume(double s);

// Closed form of the chord-power integral of the unit ball B_n when lines are
// averaged with a probability measure over directions and Lebesgue measure
// over offsets: I_q(B_n) = integral over the offset disk of (2*sqrt(1-|x|^2))^q,
// which evaluates to 2^q * unit_ball_volume(n+q-1) / unit_ball_volume(q).
// Consistent with I_1 = volume and I_{n+1} = (n+1) vol^2 / unit_ball_volume(n).
double ball_chord_integral(int n, double q);

}  // namespace chords
