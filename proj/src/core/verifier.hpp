#pragma once

#include <limits>
#include <vector>

#include "core/grid.hpp"

namespace blowup {

struct VerifierConfig {
  double courant = 0.9;  ///< dt / dx; must not exceed 0.9
  double t_max = 20.0;
  double u_max = 1e4;
  /// Extrapolation levels, chosen in the range the leapfrog still resolves (|u| dt < 1).
  std::vector<double> ladder{10.0, 20.0, 40.0};
  double fit_tolerance = 0.1;
  bool nonlinear = true;  ///< false drops the 2u^3 term (scheme checks)
  bool record_energy = false;
  std::vector<double> snapshot_times;

  void validate() const;
  double top() const;
};

inline constexpr double kNoBlowup = std::numeric_limits<double>::infinity();

struct BlowupMap {
  Field x;
  Field t_raw;      ///< first step time with |u| > u_max, or kNoBlowup
  Field t_extrap;   ///< ladder extrapolation, raw time when the fit failed
  std::vector<int> sign;
  std::vector<char> fit_ok;
  std::vector<char> monotone;  ///< |u| increasing over the last 10 steps before crossing u_max
  double u_max = 0.0;
  std::vector<double> ladder;
  int points = 0;
  double dx = 0.0;
  double dt = 0.0;
  int fit_failures = 0;

  /// Earliest finite raw time.
  double first_blowup() const;
};

struct DirectSolution {
  BlowupMap map;
  std::vector<double> snapshot_t;
  std::vector<Field> snapshots;
  std::vector<double> energy_t;
  std::vector<double> energy;
  double t_end = 0.0;
  long steps = 0;
};

/// Omega = (a, b), snapped to grid indices; indices may run past the box and wrap.
struct SubDomain {
  double a = -2.0;
  double b = 2.0;
};

struct BoundaryTrace {
  SubDomain omega;
  int left = 0;   ///< unwrapped grid index of the left boundary point
  int right = 0;  ///< unwrapped grid index of the right boundary point
  int stride = 1;
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> left_values;
  std::vector<double> right_values;

  /// Linear interpolation in t; throws OutOfRange past the last sample.
  std::pair<double, double> at(double time) const;
};

/// Leapfrog for u_tt = u_xx + 2u^3 on the periodic grid from (u, u_t) at t = 0.
/// Throws CFLViolation, ImmediateOverflow.
DirectSolution solve_direct(const GridSpec& grid, const Field& u, const Field& ut, const VerifierConfig& cfg);

/// Same scheme on the grid points of omega with boundary values taken from the trace.
/// Fields in the result are full-size; entries outside omega hold NaN / kNoBlowup.
DirectSolution solve_dirichlet(const GridSpec& grid, const Field& u, const Field& ut, const BoundaryTrace& trace,
                               const VerifierConfig& cfg);

/// Records u at the two boundary points of omega every `stride` steps, up to the last step
/// before the first crossing of u_max anywhere. Throws BlowupReachedBoundary when the first
/// crossing happens on or outside the boundary of omega rather than inside it.
BoundaryTrace record_boundary_trace(const GridSpec& grid, const Field& u, const Field& ut, const SubDomain& omega,
                                    const VerifierConfig& cfg, int stride = 1);

/// Fit of 1/|u| = a + b t through the ladder crossings; t_b is the zero of the line.
struct ThresholdFit {
  double t_blow = kNoBlowup;
  double residual = 0.0;  ///< max relative misfit of 1/|u| at the crossings
};

/// Throws FitFailure if fewer than two crossings, a non-decreasing 1/|u|, or a residual above tolerance.
ThresholdFit fit_crossings(const std::vector<double>& t_cross, const std::vector<double>& levels, double tolerance = 0.1);

/// Crossing times of each ladder level in a sampled history (1/|u| interpolated linearly), then fit_crossings.
ThresholdFit threshold_extrapolation(const std::vector<double>& t, const std::vector<double>& u,
                                     const std::vector<double>& ladder, double tolerance = 0.1);

struct BlowupComparison {
  double max_error = 0.0;  ///< over the earliest-10% quantile
  int quantile_count = 0;
  double quantile_time = 0.0;
  int argmin_index = -1;
  double argmin_x = 0.0;
  double min_time = kNoBlowup;
  bool argmin_in_K = false;
};

BlowupComparison compare_blowup(const BlowupMap& map, const Field& predicted, const std::vector<bool>& K,
                                bool use_extrapolated = true);

/// Discrete energy sum dx [u_t^2 + u_x^2 - u^4] with centered u_t.
double discrete_energy(const Field& prev, const Field& cur, const Field& next, double dx, double dt);

}  // namespace blowup
