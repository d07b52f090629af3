#include <cmath>

#include "doctest.h"

#include "core/error.hpp"
#include "core/surface.hpp"

using namespace blowup;

namespace {

GridSpec grid(int n) {
  GridSpec g;
  g.points = n;
  return g;
}

}  // namespace

TEST_CASE("cosine well derivatives are exact") {
  const double lam = 0.07;
  const BlowupSurface s = build_surface(Profile::cosine_well(lam), grid(64));
  for (int j = 0; j < 64; ++j) {
    const double x = s.grid().x(j);
    const auto k = static_cast<std::size_t>(j);
    CHECK(s.psi()[k] == doctest::Approx(-lam * (1 - std::cos(x))).epsilon(1e-14));
    CHECK(s.derivative(1)[k] == doctest::Approx(-lam * std::sin(x)).epsilon(1e-14));
    CHECK(std::abs(s.derivative(2)[k] + lam * std::cos(x)) < 1e-15);
    CHECK(std::abs(s.derivative(5)[k] + lam * std::sin(x)) < 1e-14);
    CHECK(std::abs(s.derivative(8)[k] - lam * std::cos(x)) < 1e-14);
    CHECK(s.gamma()[k] == doctest::Approx(1 - std::pow(lam * std::sin(x), 2)).epsilon(1e-15));
  }
}

TEST_CASE("bump derivatives match central differences") {
  const Profile p = Profile::bump(-0.3, 1.0, 1.5);
  const double h = 1e-4;
  for (double x : {0.0, 0.4, 1.3, 2.2}) {
    const auto d = p.derivatives(x, 3);
    CHECK(d[1] == doctest::Approx((p.value(x + h) - p.value(x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(d[2] == doctest::Approx((p.value(x + h) - 2 * p.value(x) + p.value(x - h)) / (h * h)).epsilon(1e-5));
  }
  // Support is [center - width, center + width], periodized.
  CHECK(p.value(1.0 + 1.6) == 0.0);
  CHECK(p.value(1.0 - 2 * std::numbers::pi) == doctest::Approx(-0.3));
}

TEST_CASE("admissibility is enforced") {
  CHECK_THROWS_AS(build_surface(Profile::cosine_well(1.2), grid(64)), Error);
  try {
    build_surface(Profile::cosine_well(0.6), grid(64));  // sup|psi| = 1.2
    FAIL("expected AssumptionViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AssumptionViolation);
  }
  GridSpec bad = grid(4);
  CHECK_THROWS_AS(build_surface(Profile::zero(), bad), Error);
  GridSpec two = grid(32);
  two.dim = 2;
  try {
    build_surface(Profile::zero(), two);
    FAIL("expected Unsupported");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
  }
}

TEST_CASE("scaling the surface scales every derivative") {
  const BlowupSurface s = build_surface(Profile::cosine_series(-0.1, {0.05, 0.02}, {0.03, -0.01}), grid(32));
  const BlowupSurface h = scale_surface(s, 0.5);
  const BlowupSurface direct = build_surface(s.generator().scaled(0.5), grid(32));
  for (int k = 0; k <= BlowupSurface::kMaxDerivative; ++k)
    for (int j = 0; j < 32; ++j)
      CHECK(h.derivative(k)[static_cast<std::size_t>(j)] ==
            doctest::Approx(direct.derivative(k)[static_cast<std::size_t>(j)]).epsilon(1e-14));
}

TEST_CASE("zero set of a cosine well is the origin") {
  const BlowupSurface s = build_surface(Profile::cosine_well(0.05), grid(128));
  const auto K = zero_set_indicator(s, 1e-12);
  CHECK(K[0]);
  int count = 0;
  for (bool b : K) count += b;
  CHECK(count == 1);
  const BlowupSurface up = build_surface(Profile::bump(0.3, 0.0, 1.0), grid(128));
  try {
    zero_set_indicator(up, 1e-12);
    FAIL("expected ShapeViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ShapeViolation);
  }
}

TEST_CASE("profile family names round trip") {
  for (auto f : {ProfileFamily::Zero, ProfileFamily::CosineWell, ProfileFamily::CosineSeries, ProfileFamily::Bump,
                 ProfileFamily::Linear})
    CHECK(parse_profile_family(to_string(f)) == f);
  CHECK_THROWS_AS(parse_profile_family("paraboloid"), Error);
}

TEST_CASE("periodic offset") {
  const double L = 2 * std::numbers::pi;
  CHECK(periodic_offset(0.1, L - 0.1, L) == doctest::Approx(-0.2));
  CHECK(periodic_offset(L - 0.1, 0.1, L) == doctest::Approx(0.2));
  CHECK(periodic_offset(1.0, 1.5, L) == doctest::Approx(0.5));
}
