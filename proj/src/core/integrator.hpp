#pragma once

#include <array>
#include <vector>

#include "core/reduced.hpp"

namespace blowup {

struct IntegratorConfig {
  double T_start = 1e-3;
  double b = 13.0;
  double cfl = 0.5;
  double dtau_max = 0.05;
  /// Per-step cap on dtau * |Dz|_inf relative to 1 + |z|_inf.
  double dw_max = 0.05;
  int shift = 0;
  double u_guard = 1e6;
  double min_dtau = 1e-12;
  long max_steps = 10'000'000;
  double energy_s = 3.0;
  int energy_every = 1;  ///< 0 disables the energy log

  void validate() const;
};

/// Checkpointed solution of the reduced system on [T_start, b] with Hermite dense output in tau = ln T.
class ReducedTrajectory {
 public:
  const std::vector<double>& times() const { return T_; }
  const std::vector<ReducedState>& states() const { return states_; }
  const std::vector<EnergyReading>& energy_log() const { return energy_; }
  int steps() const { return static_cast<int>(T_.size()) - 1; }
  double T_start() const { return T_.front(); }
  double T_end() const { return T_.back(); }
  int shift() const { return shift_; }

  /// State at T; bitwise the checkpoint when T is a node. Throws OutOfRange.
  ReducedState sample(double T) const;
  /// (w, w_(0), w_(1)) at grid point j.
  std::array<double, 3> sample_point(int j, double T) const;

 private:
  friend ReducedTrajectory integrate(const ReducedModel&, const IntegratorConfig&);
  std::size_t bracket(double T) const;

  std::vector<double> T_;
  std::vector<double> tau_;
  std::vector<ReducedState> states_;
  std::vector<ReducedState> derivs_;  // D w at each node
  std::vector<EnergyReading> energy_;
  int shift_ = 0;
};

/// Classical RK4 in tau from a series seed at T_start up to b.
/// Throws BlowupInReducedSystem if |w|_inf exceeds u_guard, StepCollapse if the step underflows.
ReducedTrajectory integrate(const ReducedModel& model, const IntegratorConfig& cfg);

/// Per-step limit used by integrate; exposed for tests.
double controller_step(const ReducedModel& model, const IntegratorConfig& cfg, double T, double rhs_sup, double state_sup);

}  // namespace blowup
