#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

#include "core/expansion.hpp"
#include "core/log_series.hpp"
#include "core/spectral.hpp"
#include "core/surface.hpp"

namespace blowup {

/// Matrices of the reduced symmetric system Q(D + A) w = T A^1 d_x w + ..., n = 1.
struct SystemMatrices {
  Field gamma;
  Field psi_x;
  Eigen::Matrix3d A;  ///< constant; mutable only so the check command can inject faults

  int size() const { return static_cast<int>(gamma.size()); }
  Eigen::Matrix3d Q(int j) const;
  Eigen::Matrix3d A1(int j) const;
  Eigen::Matrix3d V(int j) const;

  static Eigen::Matrix3d constant_A();
};

/// Throws DegenerateSurface if inf gamma < gamma_floor.
SystemMatrices assemble_matrices(const BlowupSurface& s, double gamma_floor = 1e-3);

struct MatrixCheck {
  double q_asymmetry = 0.0;
  double a1_asymmetry = 0.0;
  double va1_defect = 0.0;           ///< max |V A^1 - A^1|
  double min_vqa_eigenvalue = 0.0;
  double vqa_asymmetry = 0.0;
  std::array<double, 3> a_spectrum{};  ///< sorted ascending
  double null_defect = 0.0;           ///< |A (1, 3, 0)|
  double min_q_eigenvalue = 0.0;
};

MatrixCheck check_matrices(const SystemMatrices& m);

/// w = (w, w_(0), w_(1)) on the grid at time offset T.
struct ReducedState {
  double T = 0.0;
  Field w;
  Field w0c;
  Field w1;

  static ReducedState zeros(int n, double T = 0.0);
  /// The null-space state (w0, 3 w0, 0).
  static ReducedState from_datum(const Field& w0, double T = 0.0);

  int size() const { return static_cast<int>(w.size()); }
  Field& component(int i) { return i == 0 ? w : (i == 1 ? w0c : w1); }
  const Field& component(int i) const { return i == 0 ? w : (i == 1 ? w0c : w1); }
  double sup_norm() const;
  /// this += a * o (T unchanged).
  void axpy(double a, const ReducedState& o);
};

/// Solution variables (u, u_(0), u_(1)) of the first-order system in (T, X).
struct SolutionFields {
  Field u;
  Field u0;
  Field u1;
};

struct EnergyReading {
  double T = 0.0;
  double e0 = 0.0;
  double es = 0.0;
  double sup_norm = 0.0;
  double De0 = 0.0;
};

/// Everything needed to evaluate the reduced flow for one surface and one datum w0.
///
/// With t0 = T and t1 = T ln T the change of unknowns reads
///   u     = E + T^3 w,
///   u_(0) = E_T + T^2 w_(0),
///   u_(1) = sum_{k<=3} u_k' T^{k-1} + T^2 w_(1),
/// where E is the truncated expansion. Near T = 0 the right-hand side is evaluated from
/// identities in which the expansion terms are cancelled on series coefficients, so no
/// O(1/T^k) quantities are ever subtracted in floating point.
class ReducedModel {
 public:
  ReducedModel(const BlowupSurface& s, const ExpansionCoefficients& c, const Field& w0, int seed_order = 4);

  const BlowupSurface& surface() const { return surface_; }
  const ExpansionCoefficients& coefficients() const { return coeffs_; }
  const Spectral& spectral() const { return spectral_; }
  const SystemMatrices& matrices() const { return matrices_; }
  SystemMatrices& matrices() { return matrices_; }
  const Field& datum() const { return w0_; }
  int seed_order() const { return seed_order_; }

  SolutionFields reconstruct(const ReducedState& w) const;
  /// Inverse of reconstruct.
  ReducedState extract(const SolutionFields& f, double T) const;

  /// D w = T dw/dT at w.T > 0.
  ReducedState rhs(const ReducedState& w) const;
  /// Same quantity through reconstruct / differentiate via the first-order system / invert.
  /// Loses precision like eps/T^4; meant for cross-checks at moderate T.
  ReducedState rhs_direct(const ReducedState& w) const;
  /// Limit of D w at T = 0; zero on the null space of A. Throws NullSpaceViolation otherwise.
  ReducedState fuchsian_limit(const ReducedState& w) const;

  /// Truncated series solution sum c_{m,l} T^m (ln T)^l, m <= seed_order.
  ReducedState seed(double T) const;
  const std::array<LogSeries, 3>& seed_series() const { return seed_; }

  /// Shifted unknown z = (w - S_h) / T^h, S_h the seed truncated below order h.
  ReducedState to_shifted(const ReducedState& w, int h) const;
  ReducedState from_shifted(const ReducedState& z, int h) const;
  /// D z for the shifted unknown.
  ReducedState rhs_shifted(const ReducedState& z, int h) const;

  EnergyReading energy(const ReducedState& w, double s_index) const;

 private:
  struct ShiftData {
    std::array<LogSeries, 3> S;         // orders < h
    std::array<LogSeries, 3> residual;  // (-A S + B(S) - D S) / T^h, orders >= h only
  };

  std::array<LogSeries, 3> series_B(const std::array<LogSeries, 3>& W, int max_power) const;
  const ShiftData& shift_data(int h) const;
  Field d(const Field& f) const { return spectral_.derivative(f, 1); }

  BlowupSurface surface_;
  ExpansionCoefficients coeffs_;
  Spectral spectral_;
  SystemMatrices matrices_;
  Field w0_;
  int seed_order_;

  Field inv_gamma_;
  LogSeries E_;        // truncated expansion
  LogSeries P_;        // T E
  LogSeries P2mg_;     // P^2 - gamma with the constant term removed
  LogSeries forcing0c_;  // (-rho - T^2 ln T u41'') / gamma
  LogSeries forcing1_;   // T (1 + 3 ln T) u41'
  std::array<LogSeries, 3> seed_;
  mutable std::map<int, std::shared_ptr<const ShiftData>> shifts_;
  mutable std::unique_ptr<std::mutex> shift_mutex_ = std::make_unique<std::mutex>();
};

}  // namespace blowup
