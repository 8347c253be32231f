#include <cmath>
#include <initializer_list>

#include "chords/omega.hpp"
#include "doctest.h"

using chords::ball_chord_integral;
using chords::unit_ball_volume;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("unit ball volume at integer dimensions") {
  CHECK(unit_ball_volume(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-15));
  CHECK(unit_ball_volume(4) == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-15));
}

TEST_CASE("unit ball volume at fractional dimension") {
  // pi^{7/4} / Gamma(11/4), evaluated independently.
  CHECK(unit_ball_volume(3.5) == doctest::Approx(4.6092383817231498).epsilon(1e-13));
  // Recursion omega(s) = (2 pi / s) omega(s - 2) holds off the integers.
  for (double s : {2.5, 3.3, 5.75}) {
    CHECK(unit_ball_volume(s) ==
          doctest::Approx(2.0 * kPi / s * unit_ball_volume(s - 2.0)).epsilon(1e-13));
  }
}

TEST_CASE("ball chord integral matches volume at q = 1") {
  for (int n : {2, 3, 4}) {
    CHECK(ball_chord_integral(n, 1.0) == doctest::Approx(unit_ball_volume(n)).epsilon(1e-13));
  }
}

TEST_CASE("ball chord integral matches the q = n + 1 volume identity") {
  for (int n : {2, 3}) {
    const double vol = unit_ball_volume(n);
    CHECK(ball_chord_integral(n, n + 1.0) ==
          doctest::Approx((n + 1.0) * vol * vol / unit_ball_volume(n)).epsilon(1e-13));
  }
}

TEST_CASE("ball chord integral at q = 2.5") {
  // 2^q omega(n+q-1) / omega(q) for n = 2 and n = 3, evaluated independently.
  CHECK(ball_chord_integral(2, 2.5) == doctest::Approx(7.0631416278147502).epsilon(1e-13));
  CHECK(ball_chord_integral(3, 2.5) == doctest::Approx(7.8984585567259844).epsilon(1e-13));
}
