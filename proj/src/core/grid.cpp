#include "core/grid.hpp"

#include <algorithm>
#include <string>

#include "core/error.hpp"

namespace blowup {

Field GridSpec::coordinates() const {
  Field xs(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) xs[static_cast<std::size_t>(j)] = x(j);
  return xs;
}

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) throw Error(ErrorKind::InvalidConfig, "grid dimension must be 1 or 2");
  if (dim == 2) throw Error(ErrorKind::Unsupported, "only n = 1 grids are implemented");
  if (points < 8) throw Error(ErrorKind::InvalidConfig, "grid needs at least 8 points per axis, got " + std::to_string(points));
  if (!(length > 0.0) || !std::isfinite(length)) throw Error(ErrorKind::InvalidConfig, "box length must be positive");
  if (!std::isfinite(origin)) throw Error(ErrorKind::InvalidConfig, "box origin must be finite");
}

double periodic_offset(double a, double b, double length) {
  double d = std::fmod(b - a, length);
  if (d > 0.5 * length) d -= length;
  if (d <= -0.5 * length) d += length;
  return d;
}

double sup_abs(const Field& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

double max_of(const Field& f) { return *std::max_element(f.begin(), f.end()); }
double min_of(const Field& f) { return *std::min_element(f.begin(), f.end()); }

}  // namespace blowup
