#include <cmath>
#include <numbers>

#include "doctest.h"

#include "core/spectral.hpp"

using namespace blowup;

namespace {

GridSpec grid(int n, double L = 2 * std::numbers::pi) {
  GridSpec g;
  g.points = n;
  g.length = L;
  return g;
}

Field sample(const GridSpec& g, double (*f)(double)) {
  Field v(static_cast<std::size_t>(g.points));
  for (int j = 0; j < g.points; ++j) v[static_cast<std::size_t>(j)] = f(g.x(j));
  return v;
}

}  // namespace

TEST_CASE("spectral derivatives of trigonometric fields") {
  const GridSpec g = grid(64);
  const Spectral sp(g);
  const Field f = sample(g, [](double x) { return std::sin(3 * x) + 0.5 * std::cos(7 * x); });
  const Field d1 = sp.derivative(f, 1);
  const Field d2 = sp.derivative(f, 2);
  for (int j = 0; j < 64; ++j) {
    const double x = g.x(j);
    CHECK(std::abs(d1[static_cast<std::size_t>(j)] - (3 * std::cos(3 * x) - 3.5 * std::sin(7 * x))) < 1e-12);
    CHECK(std::abs(d2[static_cast<std::size_t>(j)] - (-9 * std::sin(3 * x) - 24.5 * std::cos(7 * x))) < 1e-11);
  }
}

TEST_CASE("sobolev norms of single modes") {
  const double L = 2 * std::numbers::pi;
  const Spectral sp(grid(32));
  const Field c(32, 0.3);
  for (double s : {0.0, 1.0, 2.5}) CHECK(sp.sobolev_norm(c, s) == doctest::Approx(0.3 * std::sqrt(L)).epsilon(1e-13));
  const Field w = sample(grid(32), [](double x) { return std::sin(4 * x); });
  for (double s : {0.0, 1.0, 3.0})
    CHECK(sp.sobolev_norm(w, s) == doctest::Approx(std::sqrt(L / 2) * std::pow(17.0, s / 2)).epsilon(1e-12));
  CHECK(sp.cauchy_pair_norm(c, w, 2.0) == doctest::Approx(sp.sobolev_norm(c, 2) + sp.sobolev_norm(w, 1)));
}

TEST_CASE("s = 0 norm is the trapezoid L2 norm") {
  const GridSpec g = grid(50, 3.0);
  const Spectral sp(g);
  Field f(50);
  for (int j = 0; j < 50; ++j) f[static_cast<std::size_t>(j)] = std::exp(std::sin(2 * std::numbers::pi * g.x(j) / 3.0)) + 0.1 * j;
  CHECK(sp.sobolev_norm(f, 0) == doctest::Approx(std::sqrt(l2_inner(f, f, g.spacing()))).epsilon(1e-13));
}

TEST_CASE("S multiplier inverts and composes") {
  const GridSpec g = grid(64);
  const Spectral sp(g);
  const Field f = sample(g, [](double x) { return std::exp(std::cos(x)); });
  const Field back = sp.apply_S(sp.apply_S(f, 3.0), -3.0);
  for (int j = 0; j < 64; ++j) CHECK(std::abs(back[static_cast<std::size_t>(j)] - f[static_cast<std::size_t>(j)]) < 1e-12);
  // ||S^s f||_0 = ||f||_s
  CHECK(sp.sobolev_norm(sp.apply_S(f, 2.0), 0.0) == doctest::Approx(sp.sobolev_norm(f, 2.0)).epsilon(1e-12));
}

TEST_CASE("resampling a band-limited field is exact") {
  const GridSpec g = grid(32);
  const Spectral sp(g);
  const Field f = sample(g, [](double x) { return std::cos(2 * x) - 0.2 * std::sin(5 * x) + 1.0; });
  const Field fine = sp.resample(f, 96);
  const GridSpec gf = grid(96);
  for (int j = 0; j < 96; ++j) {
    const double x = gf.x(j);
    CHECK(std::abs(fine[static_cast<std::size_t>(j)] - (std::cos(2 * x) - 0.2 * std::sin(5 * x) + 1.0)) < 1e-13);
  }
  const Field coarse = Spectral(gf).resample(fine, 32);
  for (int j = 0; j < 32; ++j) CHECK(std::abs(coarse[static_cast<std::size_t>(j)] - f[static_cast<std::size_t>(j)]) < 1e-13);
}

TEST_CASE("odd derivatives drop the Nyquist mode") {
  const GridSpec g = grid(16);
  Field f(16);
  for (int j = 0; j < 16; ++j) f[static_cast<std::size_t>(j)] = (j % 2 == 0) ? 1.0 : -1.0;
  const Field d = Spectral(g).derivative(f, 1);
  for (double v : d) CHECK(std::abs(v) < 1e-13);
}
