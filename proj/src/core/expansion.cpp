#include "core/expansion.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/error.hpp"

namespace blowup {

ExpansionCoefficients compute_coefficients(const BlowupSurface& s, double gamma_floor) {
  if (s.inf_gamma() < gamma_floor) {
    std::ostringstream os;
    os << "inf gamma = " << s.inf_gamma() << " below floor " << gamma_floor;
    throw Error(ErrorKind::DegenerateSurface, os.str());
  }
  const auto n = static_cast<std::size_t>(s.size());
  ExpansionCoefficients c;
  for (int k = 0; k <= ExpansionCoefficients::kU41; ++k)
    for (int d = 0; d <= 2; ++d) c.u(k, d).assign(n, 0.0);

  for (std::size_t j = 0; j < n; ++j) {
    // Second-order jets of p1..p4 in the x direction.
    std::array<Taylor, 5> p;
    for (int k = 1; k <= 4; ++k) {
      p[static_cast<std::size_t>(k)] = Taylor::from_derivatives(
          {s.derivative(k)[j], s.derivative(k + 1)[j], s.derivative(k + 2)[j]}, 2);
    }
    const std::array<Taylor, 5> jets = {
        closed_form::u0(p[1]),
        closed_form::u1(p[1], p[2]),
        closed_form::u2(p[1], p[2], p[3]),
        closed_form::u3(p[1], p[2], p[3], p[4]),
        closed_form::u41(p[1], p[2], p[3], p[4]),
    };
    for (int k = 0; k <= ExpansionCoefficients::kU41; ++k)
      for (int d = 0; d <= 2; ++d) c.u(k, d)[j] = jets[static_cast<std::size_t>(k)].derivative(d);
  }
  return c;
}

PhiSlice evaluate_phi(const ExpansionCoefficients& c, const BlowupSurface& s, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::SliceThroughSingularity, "slice time must be positive");
  const auto n = static_cast<std::size_t>(s.size());
  PhiSlice out{Field(n), Field(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double T = t - s.psi()[j];
    if (!(T > 0.0)) {
      std::ostringstream os;
      os << "T = t - psi(x) = " << T << " at grid index " << j;
      throw Error(ErrorKind::SliceThroughSingularity, os.str());
    }
    const double lnT = std::log(T);
    const double u0 = c.u(0)[j], u1 = c.u(1)[j], u2 = c.u(2)[j], u3 = c.u(3)[j];
    const double u41 = c.u(ExpansionCoefficients::kU41)[j];
    out.phi[j] = (u0 / T - 1.0 / t) + u1 + u2 * T + u3 * T * T + u41 * T * T * T * lnT;
    out.phi_t[j] = (-u0 / (T * T) + 1.0 / (t * t)) + u2 + 2.0 * u3 * T + u41 * (3.0 * T * T * lnT + T * T);
  }
  return out;
}

LogSeries truncated_expansion(const ExpansionCoefficients& c, int x_derivative) {
  LogSeries e(static_cast<std::size_t>(c.size()));
  for (int k = 0; k <= 3; ++k) e.add_term(k - 1, 0, c.u(k, x_derivative));
  e.add_term(3, 1, c.u(ExpansionCoefficients::kU41, x_derivative));
  return e;
}

LogSeries expansion_residual(const ExpansionCoefficients& c, const BlowupSurface& s) {
  const LogSeries e = truncated_expansion(c, 0);
  const LogSeries ex = truncated_expansion(c, 1);
  const LogSeries exx = truncated_expansion(c, 2);
  const LogSeries et = e.dT();
  Field two_psi_x = s.derivative(1);
  for (double& v : two_psi_x) v *= 2.0;

  LogSeries r = et.dT().times(s.gamma());
  r -= exx;
  r += ex.dT().times(two_psi_x);
  r += et.times(s.derivative(2));
  r -= 2.0 * e.times(e).times(e);
  return r;
}

namespace {

struct FitResult {
  Eigen::VectorXd beta;
  double rss = 0.0;
};

FitResult least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  FitResult f;
  f.beta = X.colPivHouseholderQr().solve(y);
  f.rss = (X * f.beta - y).squaredNorm();
  return f;
}

}  // namespace

SeriesResidualReport residual_order_check(const ExpansionCoefficients& c, const BlowupSurface& s,
                                          const std::vector<double>& T_samples) {
  SeriesResidualReport rep;
  const LogSeries r = expansion_residual(c, s);
  for (const auto& [key, v] : r.terms())
    if (key.first < kFirstResidualPower) rep.cancelled_max = std::max(rep.cancelled_max, sup_abs(v));
  const LogSeries tail = r.band(kFirstResidualPower, std::numeric_limits<int>::max());

  rep.T = T_samples;
  for (double T : T_samples) rep.residual_sup.push_back(sup_abs(tail.evaluate(T)));

  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < rep.T.size(); ++i)
    if (rep.residual_sup[i] > 0.0) used.push_back(i);
  if (used.size() < 4) {
    rep.fitted_p = std::numeric_limits<double>::infinity();
    return rep;
  }
  const auto m = static_cast<Eigen::Index>(used.size());
  Eigen::MatrixXd X1(m, 2), X2(m, 3);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double T = rep.T[used[static_cast<std::size_t>(i)]];
    X1(i, 0) = X2(i, 0) = 1.0;
    X1(i, 1) = X2(i, 1) = std::log(T);
    X2(i, 2) = std::log(std::abs(std::log(T)));
    y(i) = std::log(rep.residual_sup[used[static_cast<std::size_t>(i)]]);
  }
  const FitResult f1 = least_squares(X1, y);
  const FitResult f2 = least_squares(X2, y);
  const double tiny = 1e-300;
  const double aic1 = m * std::log(std::max(f1.rss / m, tiny)) + 4.0;
  const double aic2 = m * std::log(std::max(f2.rss / m, tiny)) + 6.0;
  if (aic2 < aic1) {
    rep.log_correction = true;
    rep.fitted_p = f2.beta(1);
    rep.fitted_q = f2.beta(2);
  } else {
    rep.fitted_p = f1.beta(1);
  }
  return rep;
}

std::vector<double> log_samples(double hi, double lo, int per_decade) {
  std::vector<double> out;
  const double decades = std::log10(hi / lo);
  const int count = static_cast<int>(std::ceil(decades * per_decade));
  for (int i = 0; i <= count; ++i) out.push_back(hi * std::pow(10.0, -decades * i / count));
  return out;
}

}  // namespace blowup
