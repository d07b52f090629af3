#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace blowup {

using Field = std::vector<double>;

/// Uniform periodic grid on [origin, origin + length).
struct GridSpec {
  int dim = 1;
  double length = 2.0 * std::numbers::pi;
  double origin = 0.0;
  int points = 256;

  double spacing() const { return length / points; }
  double x(int j) const { return origin + j * spacing(); }
  Field coordinates() const;

  /// Throws InvalidConfig / Unsupported when the spec is unusable.
  void validate() const;

  /// Same box, different resolution.
  GridSpec with_points(int n) const {
    GridSpec g = *this;
    g.points = n;
    return g;
  }
};

/// Periodic signed distance from a to b, in (-length/2, length/2].
double periodic_offset(double a, double b, double length);

double sup_abs(const Field& f);
double max_of(const Field& f);
double min_of(const Field& f);

}  // namespace blowup
