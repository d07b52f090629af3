#pragma once

#include <functional>
#include <limits>
#include <map>
#include <utility>

#include "core/grid.hpp"

namespace blowup {

/// Finite sum  sum_{m,l} c_{m,l}(x) T^m (ln T)^l  with field-valued coefficients.
///
/// Used wherever a quantity is known as a polynomial in T and T ln T so that
/// exact cancellations between orders can be done on coefficients instead of
/// on floating-point values near T = 0.
class LogSeries {
 public:
  using Key = std::pair<int, int>;  // (power of T, power of ln T)

  LogSeries() = default;
  explicit LogSeries(std::size_t points) : points_(points) {}

  static LogSeries monomial(const Field& coeff, int power, int log_power = 0);

  std::size_t points() const { return points_; }
  const std::map<Key, Field>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of T^m (ln T)^l (zero field if absent).
  Field coefficient(int m, int l) const;
  void add_term(int m, int l, const Field& c, double factor = 1.0);

  int min_power() const;
  int max_power() const;
  int max_log_power() const;

  LogSeries& operator+=(const LogSeries& o);
  LogSeries& operator-=(const LogSeries& o);
  LogSeries& operator*=(double s);
  friend LogSeries operator+(LogSeries a, const LogSeries& b) { return a += b; }
  friend LogSeries operator-(LogSeries a, const LogSeries& b) { return a -= b; }
  friend LogSeries operator*(LogSeries a, double s) { return a *= s; }
  friend LogSeries operator*(double s, LogSeries a) { return a *= s; }

  /// Product; terms with T-power above max_power are discarded.
  LogSeries times(const LogSeries& o, int max_power = std::numeric_limits<int>::max()) const;
  /// Pointwise product with a field.
  LogSeries times(const Field& f) const;
  /// Multiplication by T^k.
  LogSeries shifted(int k) const;

  /// d/dT.
  LogSeries dT() const;
  /// T d/dT.
  LogSeries D() const;

  /// Apply a field map to every coefficient (e.g. a spatial derivative).
  LogSeries map(const std::function<Field(const Field&)>& fn) const;
  /// Only the terms with lo <= power <= hi.
  LogSeries band(int lo, int hi) const;

  Field evaluate(double T) const;
  double evaluate_at(std::size_t j, double T) const;

 private:
  std::size_t points_ = 0;
  std::map<Key, Field> terms_;
};

}  // namespace blowup
