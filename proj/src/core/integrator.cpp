#include "core/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace blowup {

void IntegratorConfig::validate() const {
  if (!(T_start > 0.0)) throw Error(ErrorKind::InvalidConfig, "T_start must be positive");
  if (!(b > T_start)) throw Error(ErrorKind::InvalidConfig, "b must exceed T_start");
  if (!(cfl > 0.0) || !(dtau_max > 0.0) || !(dw_max > 0.0)) throw Error(ErrorKind::InvalidConfig, "step limits must be positive");
  if (shift < 0) throw Error(ErrorKind::InvalidConfig, "shift must be nonnegative");
  if (!(u_guard > 0.0)) throw Error(ErrorKind::InvalidConfig, "u_guard must be positive");
}

double controller_step(const ReducedModel& model, const IntegratorConfig& cfg, double T, double rhs_sup, double state_sup) {
  const BlowupSurface& s = model.surface();
  double c_max = 0.0;
  for (int j = 0; j < s.size(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    c_max = std::max(c_max, (1.0 + std::abs(s.grad_psi()[k])) / s.gamma()[k]);
  }
  double dtau = cfg.dtau_max;
  dtau = std::min(dtau, cfg.cfl * s.grid().spacing() / (T * c_max));
  if (rhs_sup > 0.0) dtau = std::min(dtau, cfg.dw_max * (1.0 + state_sup) / rhs_sup);
  return dtau;
}

namespace {

ReducedState combine(const ReducedState& y, double a, const ReducedState& k, double T) {
  ReducedState r = y;
  r.axpy(a, k);
  r.T = T;
  return r;
}

bool finite(const ReducedState& s) {
  for (int i = 0; i < 3; ++i)
    for (double v : s.component(i))
      if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

ReducedTrajectory integrate(const ReducedModel& model, const IntegratorConfig& cfg) {
  cfg.validate();
  for (double v : model.datum())
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidConfig, "datum w0 is not finite");
  model.fuchsian_limit(ReducedState::from_datum(model.datum()));

  const int h = cfg.shift;
  ReducedTrajectory traj;
  traj.shift_ = h;

  auto record = [&](const ReducedState& w, long step) {
    traj.T_.push_back(w.T);
    traj.tau_.push_back(std::log(w.T));
    traj.derivs_.push_back(model.rhs(w));
    traj.states_.push_back(w);
    if (cfg.energy_every > 0 && step % cfg.energy_every == 0) traj.energy_.push_back(model.energy(w, cfg.energy_s));
  };

  ReducedState w = model.seed(cfg.T_start);
  record(w, 0);
  ReducedState z = model.to_shifted(w, h);
  double tau = std::log(cfg.T_start);
  const double tau_end = std::log(cfg.b);

  long step = 0;
  while (tau < tau_end) {
    if (++step > cfg.max_steps) throw Error(ErrorKind::StepCollapse, "step budget exhausted");
    z.T = std::exp(tau);
    const ReducedState k1 = model.rhs_shifted(z, h);
    double dtau = controller_step(model, cfg, z.T, k1.sup_norm(), z.sup_norm());
    const double remaining = tau_end - tau;
    const bool last = dtau >= remaining;
    if (!last && dtau < cfg.min_dtau) {
      std::ostringstream os;
      os << "step " << dtau << " in tau at T = " << z.T;
      throw Error(ErrorKind::StepCollapse, os.str());
    }
    if (last) dtau = remaining;
    const double tau_mid = tau + 0.5 * dtau;
    const double tau_new = last ? tau_end : tau + dtau;
    const double T_mid = std::exp(tau_mid);
    const double T_new = last ? cfg.b : std::exp(tau_new);

    const ReducedState k2 = model.rhs_shifted(combine(z, 0.5 * dtau, k1, T_mid), h);
    const ReducedState k3 = model.rhs_shifted(combine(z, 0.5 * dtau, k2, T_mid), h);
    const ReducedState k4 = model.rhs_shifted(combine(z, dtau, k3, T_new), h);
    z.axpy(dtau / 6.0, k1);
    z.axpy(dtau / 3.0, k2);
    z.axpy(dtau / 3.0, k3);
    z.axpy(dtau / 6.0, k4);
    z.T = T_new;
    tau = tau_new;

    w = model.from_shifted(z, h);
    const double sup = w.sup_norm();
    if (!finite(w) || sup > cfg.u_guard) {
      std::ostringstream os;
      os << "|w| = " << sup << " exceeds guard " << cfg.u_guard << " at T = " << T_new;
      throw Error(ErrorKind::BlowupInReducedSystem, os.str());
    }
    record(w, step);
  }
  return traj;
}

std::size_t ReducedTrajectory::bracket(double T) const {
  const double lo = T_.front();
  const double hi = T_.back();
  if (!(T >= lo * (1.0 - 1e-14)) || !(T <= hi * (1.0 + 1e-14))) {
    std::ostringstream os;
    os << "T = " << T << " outside trajectory range [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::OutOfRange, os.str());
  }
  auto it = std::upper_bound(T_.begin(), T_.end(), T);
  std::size_t i = it == T_.begin() ? 0 : static_cast<std::size_t>(it - T_.begin()) - 1;
  return std::min(i, T_.size() - 2);
}

namespace {

struct HermiteWeights {
  double h00, h10, h01, h11;
};

HermiteWeights hermite(double s, double dt) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return {2 * s3 - 3 * s2 + 1, (s3 - 2 * s2 + s) * dt, -2 * s3 + 3 * s2, (s3 - s2) * dt};
}

}  // namespace

ReducedState ReducedTrajectory::sample(double T) const {
  if (T_.size() == 1) {
    if (T == T_[0]) return states_[0];
    throw Error(ErrorKind::OutOfRange, "single-node trajectory");
  }
  const std::size_t i = bracket(T);
  if (T == T_[i]) return states_[i];
  if (T == T_[i + 1]) return states_[i + 1];
  const double dt = tau_[i + 1] - tau_[i];
  const double s = (std::log(T) - tau_[i]) / dt;
  const HermiteWeights hw = hermite(s, dt);
  ReducedState r = ReducedState::zeros(states_[i].size(), T);
  for (int c = 0; c < 3; ++c) {
    Field& dst = r.component(c);
    const Field& y0 = states_[i].component(c);
    const Field& y1 = states_[i + 1].component(c);
    const Field& d0 = derivs_[i].component(c);
    const Field& d1 = derivs_[i + 1].component(c);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = hw.h00 * y0[j] + hw.h10 * d0[j] + hw.h01 * y1[j] + hw.h11 * d1[j];
  }
  return r;
}

std::array<double, 3> ReducedTrajectory::sample_point(int j, double T) const {
  const auto k = static_cast<std::size_t>(j);
  std::array<double, 3> out{};
  if (T_.size() == 1) {
    if (T != T_[0]) throw Error(ErrorKind::OutOfRange, "single-node trajectory");
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(c)] = states_[0].component(c)[k];
    return out;
  }
  const std::size_t i = bracket(T);
  if (T == T_[i] || T == T_[i + 1]) {
    const std::size_t n = T == T_[i] ? i : i + 1;
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(c)] = states_[n].component(c)[k];
    return out;
  }
  const double dt = tau_[i + 1] - tau_[i];
  const HermiteWeights hw = hermite((std::log(T) - tau_[i]) / dt, dt);
  for (int c = 0; c < 3; ++c)
    out[static_cast<std::size_t>(c)] = hw.h00 * states_[i].component(c)[k] + hw.h10 * derivs_[i].component(c)[k] +
                                       hw.h01 * states_[i + 1].component(c)[k] + hw.h11 * derivs_[i + 1].component(c)[k];
  return out;
}

}  // namespace blowup
