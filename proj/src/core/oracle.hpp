#pragma once

#include <map>
#include <utility>

#include "core/profile.hpp"
#include "core/surface.hpp"

namespace blowup {

/// Result of brute-force order matching: coefficient fields c_{k,l} of
/// T^{k-1} (ln T)^l in U, k = 0..max_order.
struct OracleResult {
  int max_order = 0;
  int resonant_order = -1;           ///< order where the indicial factor vanished
  int first_unmatched_power = 0;     ///< lowest T-power left in the residual of the k <= 4 truncation
  int first_unmatched_log_power = 0; ///< highest ln T power at that T-power
  std::map<std::pair<int, int>, Field> coefficients;

  /// Zero field when the slot was never populated.
  Field coefficient(int k, int l) const;
};

/// Independent check of the expansion coefficients.
///
/// At every grid point psi is replaced by its Taylor polynomial in xi = x - x0
/// and U by a double series in (T, ln T) with polynomial-in-xi coefficients.
/// The wave operator is applied by generic series algebra, each order is
/// balanced by probing the linearized operator, and a logarithm is inserted
/// where the indicial factor vanishes. `free_datum` fills the free slot at the
/// resonant order (w0); zero by default.
OracleResult order_matching_oracle(const BlowupSurface& s, int max_order, const Profile& free_datum = Profile::zero());

}  // namespace blowup
