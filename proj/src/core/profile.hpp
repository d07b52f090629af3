#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "core/taylor.hpp"

namespace blowup {

/// Named closed-form families used both for the blow-up surface ψ and for
/// the free datum profile Z in w0 = θ Z.
enum class ProfileFamily { Zero, CosineWell, CosineSeries, Bump, Linear };

const char* to_string(ProfileFamily f);
ProfileFamily parse_profile_family(const std::string& name);

/// Analytic 1-D profile. Evaluation on a Taylor argument yields exact
/// derivatives of any order.
///
///   cosine_well    -amplitude * (1 - cos(wavenumber * (x - center)))
///   cosine_series  offset + sum_m a_m cos(m k (x - c)) + b_m sin(m k (x - c)), m = 1..
///   bump           amplitude * exp(1 - 1/(1 - r^2)), r = (x - center)/width, periodized
///   linear         slope * x + offset (not periodic)
///
/// Every family is multiplied by `scale`.
struct Profile {
  ProfileFamily family = ProfileFamily::Zero;
  double amplitude = 0.0;
  double wavenumber = 1.0;
  double center = 0.0;
  double width = 1.0;
  double offset = 0.0;
  double slope = 0.0;
  double period = 2.0 * std::numbers::pi;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  double scale = 1.0;

  static Profile zero() { return {}; }
  static Profile cosine_well(double lambda, double wavenumber = 1.0, double center = 0.0);
  static Profile bump(double amplitude, double center, double width, double period = 2.0 * std::numbers::pi);
  static Profile cosine_series(double offset, std::vector<double> a, std::vector<double> b, double wavenumber = 1.0);
  static Profile linear(double slope, double offset = 0.0);

  Taylor evaluate(const Taylor& x) const;
  double value(double x) const;
  /// f, f', ..., f^(order) at x.
  std::vector<double> derivatives(double x, int order) const;

  Profile scaled(double lambda) const {
    Profile p = *this;
    p.scale *= lambda;
    return p;
  }

  bool periodic() const { return family != ProfileFamily::Linear || slope == 0.0; }
  std::string describe() const;
};

}  // namespace blowup
