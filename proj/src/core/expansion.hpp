#pragma once

#include <array>
#include <vector>

#include "core/log_series.hpp"
#include "core/surface.hpp"

namespace blowup {

/// Coefficients of the singular expansion
///   u = (1/T) { u0 + u1 T + u2 T^2 + u3 T^3 + u41 T^4 ln T + T^4 w },  T = t - psi(x),
/// together with their first and second x-derivatives.
class ExpansionCoefficients {
 public:
  static constexpr int kU41 = 4;  ///< index of the log coefficient

  /// Coefficient k (0..3, or kU41), derivative order d (0..2).
  const Field& u(int k, int d = 0) const { return fields_.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(d)); }
  Field& u(int k, int d = 0) { return fields_.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(d)); }
  int size() const { return static_cast<int>(fields_[0][0].size()); }

 private:
  std::array<std::array<Field, 3>, 5> fields_;
};

/// Closed forms in terms of p_k = d^k psi / dx^k. S is double or Taylor.
namespace closed_form {

template <class S>
S u0(const S& p1) {
  using std::sqrt;
  return sqrt(1.0 - p1 * p1);
}

template <class S>
S u1(const S& p1, const S& p2) {
  using std::sqrt;
  const S g = 1.0 - p1 * p1;
  return -(p2 * (1.0 - 3.0 * (p1 * p1))) / (6.0 * (g * sqrt(g)));
}

template <class S>
S u2(const S& p1, const S& p2, const S& p3) {
  using std::sqrt;
  const S q = p1 * p1;
  const S g = 1.0 - q;
  const S num = 6.0 * (p1 * p3 * g * g) + p2 * p2 * (5.0 - 9.0 * (q * q));
  return num / (36.0 * (g * g * g * sqrt(g)));
}

template <class S>
S u3(const S& p1, const S& p2, const S& p3, const S& p4) {
  using std::sqrt;
  const S q = p1 * p1;
  const S g = 1.0 - q;
  const S g2 = g * g;
  const S q2 = q * q;
  const S q3 = q2 * q;
  const S num = 9.0 * (p4 * g2 * g2) - 6.0 * (p1 * p2 * p3 * (9.0 * q3 - 21.0 * q2 + 11.0 * q + 1.0)) +
                p2 * p2 * p2 * (54.0 * q3 - 114.0 * q - 4.0);
  return num / (216.0 * (g2 * g2 * g * sqrt(g)));
}

template <class S>
S u41(const S& p1, const S& p2, const S& p3, const S& p4) {
  using std::sqrt;
  const S q = p1 * p1;
  const S g = 1.0 - q;
  const S g2 = g * g;
  const S p22 = p2 * p2;
  const S num = 3.0 * (g2 * (p2 * p4 + p3 * p3)) + 48.0 * (g * p1 * p22 * p3) + 8.0 * (p22 * p22 * (1.0 + 9.0 * q));
  return 4.0 * num / (135.0 * (g2 * g2 * g2 * g * sqrt(g)));
}

}  // namespace closed_form

/// Throws DegenerateSurface if inf gamma < gamma_floor.
ExpansionCoefficients compute_coefficients(const BlowupSurface& s, double gamma_floor = 1e-3);

struct PhiSlice {
  Field phi;
  Field phi_t;
};

/// Phi = (u0/T - 1/t) + u1 + u2 T + u3 T^2 + u41 T^3 ln T and its t-derivative on
/// the slice t, with T = t - psi(x). Throws SliceThroughSingularity if T <= 0.
PhiSlice evaluate_phi(const ExpansionCoefficients& c, const BlowupSurface& s, double t);

/// E(T) = sum_k u_k T^{k-1} + u41 T^3 ln T, or its d-th x-derivative.
LogSeries truncated_expansion(const ExpansionCoefficients& c, int x_derivative = 0);

/// Residual of gamma U_TT - U_xx + 2 psi' U_xT + psi'' U_T - 2 U^3 = 0 for U = E(T),
/// as an exact series in T and ln T.
LogSeries expansion_residual(const ExpansionCoefficients& c, const BlowupSurface& s);

/// Lowest T-power that survives in the residual of the truncated expansion.
inline constexpr int kFirstResidualPower = 2;

struct SeriesResidualReport {
  std::vector<double> T;
  std::vector<double> residual_sup;
  double fitted_p = 0.0;
  double fitted_q = 0.0;        ///< exponent of |ln T| when the log model wins
  bool log_correction = false;  ///< AIC preferred the |ln T| regressor
  double cancelled_max = 0.0;   ///< largest coefficient among orders that must vanish
};

/// Residual sup-norms at the samples (T in (0, 0.5], decreasing) and a least-squares
/// fit residual ~ C T^p |ln T|^q.
SeriesResidualReport residual_order_check(const ExpansionCoefficients& c, const BlowupSurface& s,
                                          const std::vector<double>& T_samples);

/// Logarithmically spaced samples from hi down to lo, `per_decade` per decade.
std::vector<double> log_samples(double hi, double lo, int per_decade);

}  // namespace blowup
