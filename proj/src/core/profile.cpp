#include "core/profile.hpp"

#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/grid.hpp"

namespace blowup {

const char* to_string(ProfileFamily f) {
  switch (f) {
    case ProfileFamily::Zero: return "zero";
    case ProfileFamily::CosineWell: return "cosine_well";
    case ProfileFamily::CosineSeries: return "cosine_series";
    case ProfileFamily::Bump: return "bump";
    case ProfileFamily::Linear: return "linear";
  }
  return "unknown";
}

ProfileFamily parse_profile_family(const std::string& name) {
  if (name == "zero") return ProfileFamily::Zero;
  if (name == "cosine_well") return ProfileFamily::CosineWell;
  if (name == "cosine_series") return ProfileFamily::CosineSeries;
  if (name == "bump") return ProfileFamily::Bump;
  if (name == "linear") return ProfileFamily::Linear;
  throw Error(ErrorKind::InvalidConfig, "unknown profile family '" + name + "'");
}

Profile Profile::cosine_well(double lambda, double wavenumber, double center) {
  Profile p;
  p.family = ProfileFamily::CosineWell;
  p.amplitude = lambda;
  p.wavenumber = wavenumber;
  p.center = center;
  return p;
}

Profile Profile::bump(double amplitude, double center, double width, double period) {
  Profile p;
  p.family = ProfileFamily::Bump;
  p.amplitude = amplitude;
  p.center = center;
  p.width = width;
  p.period = period;
  return p;
}

Profile Profile::cosine_series(double offset, std::vector<double> a, std::vector<double> b, double wavenumber) {
  Profile p;
  p.family = ProfileFamily::CosineSeries;
  p.offset = offset;
  p.cos_coeffs = std::move(a);
  p.sin_coeffs = std::move(b);
  p.wavenumber = wavenumber;
  return p;
}

Profile Profile::linear(double slope, double offset) {
  Profile p;
  p.family = ProfileFamily::Linear;
  p.slope = slope;
  p.offset = offset;
  return p;
}

Taylor Profile::evaluate(const Taylor& x) const {
  const int d = x.degree();
  switch (family) {
    case ProfileFamily::Zero:
      return Taylor(d);
    case ProfileFamily::CosineWell: {
      Taylor arg = (x - center) * wavenumber;
      return (cos(arg) - 1.0) * (amplitude * scale);
    }
    case ProfileFamily::CosineSeries: {
      Taylor r(d, offset);
      for (std::size_t m = 0; m < std::max(cos_coeffs.size(), sin_coeffs.size()); ++m) {
        Taylor s, c;
        sincos((x - center) * (wavenumber * static_cast<double>(m + 1)), s, c);
        if (m < cos_coeffs.size()) r += c * cos_coeffs[m];
        if (m < sin_coeffs.size()) r += s * sin_coeffs[m];
      }
      return r * scale;
    }
    case ProfileFamily::Bump: {
      // Shift the expansion point to the periodic image nearest the center.
      const double offset_x = periodic_offset(center, x.value(), period);
      Taylor r = x;
      r[0] = offset_x;
      r = r / width;
      const double r0 = r.value();
      if (std::abs(r0) >= 1.0) return Taylor(d);
      Taylor q = 1.0 - r * r;
      return exp(1.0 - 1.0 / q) * (amplitude * scale);
    }
    case ProfileFamily::Linear:
      return (x * slope + offset) * scale;
  }
  return Taylor(d);
}

double Profile::value(double x) const { return evaluate(Taylor(0, x)).value(); }

std::vector<double> Profile::derivatives(double x, int order) const {
  const Taylor t = evaluate(Taylor::variable(order, x));
  std::vector<double> out(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) out[static_cast<std::size_t>(k)] = t.derivative(k);
  return out;
}

std::string Profile::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(family) << "(";
  switch (family) {
    case ProfileFamily::Zero: break;
    case ProfileFamily::CosineWell:
      os << "lambda=" << amplitude << ",wavenumber=" << wavenumber << ",center=" << center;
      break;
    case ProfileFamily::CosineSeries:
      os << "offset=" << offset << ",wavenumber=" << wavenumber << ",center=" << center << ",a=[";
      for (std::size_t i = 0; i < cos_coeffs.size(); ++i) os << (i ? " " : "") << cos_coeffs[i];
      os << "],b=[";
      for (std::size_t i = 0; i < sin_coeffs.size(); ++i) os << (i ? " " : "") << sin_coeffs[i];
      os << "]";
      break;
    case ProfileFamily::Bump:
      os << "amplitude=" << amplitude << ",center=" << center << ",width=" << width << ",period=" << period;
      break;
    case ProfileFamily::Linear:
      os << "slope=" << slope << ",offset=" << offset;
      break;
  }
  os << ",scale=" << scale << ")";
  return os.str();
}

}  // namespace blowup
