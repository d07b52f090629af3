#pragma once

#include <array>
#include <vector>

#include "core/grid.hpp"
#include "core/profile.hpp"

namespace blowup {

/// Prescribed blow-up surface t = psi(x) sampled on a periodic grid.
///
/// Derivative fields come from the analytic generator, so they are exact
/// (not differenced). Orders above four are kept because the second
/// spatial derivatives of the expansion coefficients reach psi^(6).
class BlowupSurface {
 public:
  static constexpr int kMaxDerivative = 8;

  const GridSpec& grid() const { return grid_; }
  const Profile& generator() const { return generator_; }
  int size() const { return grid_.points; }

  const Field& psi() const { return derivs_[0]; }
  const Field& grad_psi() const { return derivs_[1]; }
  /// d^k psi / dx^k, 0 <= k <= kMaxDerivative.
  const Field& derivative(int k) const { return derivs_.at(static_cast<std::size_t>(k)); }
  const Field& gamma() const { return gamma_; }

  double sup_grad() const { return sup_abs(derivs_[1]); }
  double sup_psi() const { return sup_abs(derivs_[0]); }
  double inf_gamma() const { return min_of(gamma_); }

 private:
  friend BlowupSurface build_surface(const Profile&, const GridSpec&);
  friend BlowupSurface scale_surface(const BlowupSurface&, double);

  void check_assumptions() const;

  GridSpec grid_;
  Profile generator_;
  std::array<Field, kMaxDerivative + 1> derivs_;
  Field gamma_;
};

/// Samples psi and its derivatives; throws AssumptionViolation unless
/// sup|psi'| < 1 and sup|psi| < 1.
BlowupSurface build_surface(const Profile& generator, const GridSpec& grid);

/// Surface generated by lambda * psi (lambda >= 0).
BlowupSurface scale_surface(const BlowupSurface& s, double lambda);

/// Discrete compact set K = {|psi| <= tol}. Throws ShapeViolation if psi > tol somewhere.
std::vector<bool> zero_set_indicator(const BlowupSurface& s, double tol);

}  // namespace blowup
