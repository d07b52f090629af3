#include <cmath>

#include "doctest.h"

#include "core/expansion.hpp"
#include "core/oracle.hpp"

using namespace blowup;

namespace {

GridSpec grid(int n) {
  GridSpec g;
  g.points = n;
  return g;
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("oracle reproduces the closed-form coefficients") {
  for (const Profile& p : {Profile::cosine_well(0.1), Profile::bump(-0.3, 1.0, 1.5),
                           Profile::cosine_series(-0.1, {0.05, 0.02}, {0.03, -0.01})}) {
    const BlowupSurface s = build_surface(p, grid(12));
    const ExpansionCoefficients c = compute_coefficients(s);
    const OracleResult o = order_matching_oracle(s, 6);
    CHECK(max_diff(o.coefficient(0, 0), c.u(0)) < 1e-12);
    CHECK(max_diff(o.coefficient(1, 0), c.u(1)) < 1e-11);
    CHECK(max_diff(o.coefficient(2, 0), c.u(2)) < 1e-11);
    CHECK(max_diff(o.coefficient(3, 0), c.u(3)) < 1e-11);
    CHECK(max_diff(o.coefficient(4, 1), c.u(ExpansionCoefficients::kU41)) < 1e-11);
    // No logarithm below the resonance.
    for (int k = 0; k < 4; ++k) CHECK(max_diff(o.coefficient(k, 1), Field(12, 0.0)) == 0.0);
  }
}

TEST_CASE("resonance and first unmatched order") {
  const BlowupSurface s = build_surface(Profile::cosine_well(0.1), grid(8));
  const OracleResult o = order_matching_oracle(s, 6);
  CHECK(o.resonant_order == 4);
  CHECK(o.first_unmatched_power == kFirstResidualPower);
  CHECK(o.first_unmatched_log_power == 1);
}

TEST_CASE("free datum propagates through the flat-surface recursion") {
  // For psi = 0 the recursion reads (k - 4)(k + 1) c_k = c_{k-2}'' at T^{k-1}.
  const Profile Z = Profile::cosine_series(0.0, {0.1}, {});
  const BlowupSurface s = build_surface(Profile::zero(), grid(10));
  const OracleResult o = order_matching_oracle(s, 6, Z);
  for (int j = 0; j < 10; ++j) {
    const double z = Z.value(s.grid().x(j));
    const auto k = static_cast<std::size_t>(j);
    CHECK(o.coefficient(4, 0)[k] == doctest::Approx(z).epsilon(1e-13));
    CHECK(std::abs(o.coefficient(5, 0)[k]) < 1e-14);
    CHECK(o.coefficient(6, 0)[k] == doctest::Approx(-z / 14.0).epsilon(1e-12));
    CHECK(o.coefficient(4, 1)[k] == 0.0);
  }
}
