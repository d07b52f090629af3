#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "doctest.h"

#include "core/error.hpp"
#include "core/integrator.hpp"

using namespace blowup;

namespace {

GridSpec grid(int n) {
  GridSpec g;
  g.points = n;
  return g;
}

// D(D + 5) w = 6 T^4 w^2 + 2 T^8 w^3 in tau = ln T, started deep in the Fuchsian regime.
double reference(double w0, double T_end) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  State y{w0, 0.0};
  auto sys = [](const State& s, State& d, double tau) {
    const double T = std::exp(tau);
    const double T4 = T * T * T * T;
    d[0] = s[1];
    d[1] = -5.0 * s[1] + 6.0 * T4 * s[0] * s[0] + 2.0 * T4 * T4 * s[0] * s[0] * s[0];
  };
  ode::bulirsch_stoer<State> stepper(1e-24, 1e-15);
  ode::integrate_adaptive(stepper, sys, y, std::log(1e-12), std::log(T_end), 1e-3);
  return y[0];
}

ReducedModel flat_model(int n, double w0) {
  const BlowupSurface s = build_surface(Profile::zero(), grid(n));
  return ReducedModel(s, compute_coefficients(s), Field(static_cast<std::size_t>(n), w0));
}

}  // namespace

TEST_CASE("homogeneous flow matches the scalar reference") {
  const ReducedModel m = flat_model(8, 1e-4);
  IntegratorConfig cfg;
  cfg.b = 5.0;
  const ReducedTrajectory tr = integrate(m, cfg);
  const double ref = reference(1e-4, 5.0);
  for (double v : tr.states().back().w) CHECK(std::abs(v - ref) < 1e-9);
  CHECK(tr.T_end() == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("dense output is exact at nodes and bounded outside") {
  const ReducedModel m = flat_model(8, 1e-4);
  IntegratorConfig cfg;
  cfg.b = 2.0;
  const ReducedTrajectory tr = integrate(m, cfg);
  const std::size_t mid = tr.times().size() / 2;
  const ReducedState s = tr.sample(tr.times()[mid]);
  for (std::size_t j = 0; j < 8; ++j) CHECK(s.w[j] == tr.states()[mid].w[j]);
  const double Tm = 0.5 * (tr.times()[mid] + tr.times()[mid + 1]);
  CHECK(tr.sample_point(0, Tm)[0] == doctest::Approx(reference(1e-4, Tm)).epsilon(1e-8));
  CHECK_THROWS_AS(tr.sample(2.5), Error);
  CHECK_THROWS_AS(tr.sample(1e-4), Error);
}

TEST_CASE("zero data on the flat surface stay at zero") {
  IntegratorConfig cfg;
  cfg.b = 3.0;
  const ReducedTrajectory tr = integrate(flat_model(8, 0.0), cfg);
  for (const ReducedState& s : tr.states()) CHECK(s.sup_norm() == 0.0);
}

TEST_CASE("large data blow up inside the reduced system") {
  IntegratorConfig cfg;
  try {
    integrate(flat_model(8, 1e-2), cfg);
    FAIL("expected BlowupInReducedSystem");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BlowupInReducedSystem);
  }
}

TEST_CASE("step controller honours the transport limit") {
  const BlowupSurface s = build_surface(Profile::cosine_well(0.1), grid(32));
  const ReducedModel m(s, compute_coefficients(s), Field(32, 0.0));
  IntegratorConfig cfg;
  cfg.dtau_max = 10.0;
  cfg.dw_max = 1e9;
  const double T = 5.0;
  const double c_max = (1.0 + 0.1) / (1.0 - 0.01);  // upper bound on (1 + |psi'|) / gamma
  const double step = controller_step(m, cfg, T, 0.0, 0.0);
  CHECK(step >= cfg.cfl * s.grid().spacing() / (T * c_max) * (1 - 1e-12));
  CHECK(step <= cfg.cfl * s.grid().spacing() / T);
  cfg.cfl *= 0.5;
  CHECK(controller_step(m, cfg, T, 0.0, 0.0) == doctest::Approx(0.5 * step));
}

TEST_CASE("energy log follows the configured cadence") {
  IntegratorConfig cfg;
  cfg.b = 1.0;
  cfg.energy_every = 5;
  const ReducedTrajectory tr = integrate(flat_model(8, 1e-4), cfg);
  CHECK(tr.energy_log().size() == static_cast<std::size_t>(tr.steps() / 5 + 1));
  cfg.energy_every = 0;
  CHECK(integrate(flat_model(8, 1e-4), cfg).energy_log().empty());
}

TEST_CASE("invalid integrator settings") {
  IntegratorConfig cfg;
  cfg.T_start = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = IntegratorConfig{};
  cfg.b = 1e-4;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = IntegratorConfig{};
  cfg.shift = -1;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
