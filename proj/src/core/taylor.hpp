#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace blowup {

/// Truncated Taylor series a_0 + a_1 ξ + ... + a_d ξ^d, with a_k = f^(k)(x0)/k!.
///
/// Arithmetic is exact up to the truncation degree, so evaluating a closed-form
/// expression on a Taylor argument yields its derivatives without differencing.
class Taylor {
 public:
  Taylor() = default;
  explicit Taylor(int degree, double value = 0.0) : c_(static_cast<std::size_t>(degree) + 1, 0.0) {
    c_[0] = value;
  }

  /// The independent variable x0 + ξ.
  static Taylor variable(int degree, double x0) {
    Taylor t(degree, x0);
    if (degree >= 1) t.c_[1] = 1.0;
    return t;
  }

  /// Series from derivative values f, f', f'', ... (scaled by 1/k!).
  static Taylor from_derivatives(const std::vector<double>& derivs, int degree) {
    Taylor t(degree);
    double fact = 1.0;
    for (int k = 0; k <= degree && k < static_cast<int>(derivs.size()); ++k) {
      if (k > 0) fact *= k;
      t.c_[static_cast<std::size_t>(k)] = derivs[static_cast<std::size_t>(k)] / fact;
    }
    return t;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double value() const { return c_[0]; }
  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

  /// k-th derivative at the expansion point.
  double derivative(int k) const {
    double fact = 1.0;
    for (int j = 2; j <= k; ++j) fact *= j;
    return k <= degree() ? c_[static_cast<std::size_t>(k)] * fact : 0.0;
  }

  /// d/dξ; the result has one degree less (kept at >= 0).
  Taylor differentiate() const {
    const int d = degree();
    Taylor r(d > 0 ? d - 1 : 0);
    for (int k = 1; k <= d; ++k) r.c_[static_cast<std::size_t>(k - 1)] = k * c_[static_cast<std::size_t>(k)];
    return r;
  }

  Taylor truncated(int degree) const {
    Taylor r(degree);
    for (int k = 0; k <= degree && k <= this->degree(); ++k) r.c_[static_cast<std::size_t>(k)] = c_[static_cast<std::size_t>(k)];
    return r;
  }

  Taylor& operator+=(const Taylor& o) {
    harmonize(o);
    for (int k = 0; k <= degree(); ++k) (*this)[k] += o[k];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    harmonize(o);
    for (int k = 0; k <= degree(); ++k) (*this)[k] -= o[k];
    return *this;
  }
  Taylor& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  Taylor& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator+(Taylor a, double s) { return a += s; }
  friend Taylor operator+(double s, Taylor a) { return a += s; }
  friend Taylor operator-(Taylor a, double s) { return a += -s; }
  friend Taylor operator-(double s, const Taylor& a) { return s + (-a); }
  friend Taylor operator*(Taylor a, double s) { return a *= s; }
  friend Taylor operator*(double s, Taylor a) { return a *= s; }
  friend Taylor operator/(Taylor a, double s) { return a *= 1.0 / s; }
  friend Taylor operator-(Taylor a) { return a *= -1.0; }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    const int d = std::min(a.degree(), b.degree());
    Taylor r(d);
    for (int i = 0; i <= d; ++i) {
      double s = 0.0;
      for (int j = 0; j <= i; ++j) s += a[j] * b[i - j];
      r[i] = s;
    }
    return r;
  }

  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    const int d = std::min(a.degree(), b.degree());
    assert(b[0] != 0.0);
    Taylor r(d);
    for (int i = 0; i <= d; ++i) {
      double s = a[i];
      for (int j = 1; j <= i; ++j) s -= b[j] * r[i - j];
      r[i] = s / b[0];
    }
    return r;
  }
  friend Taylor operator/(double s, const Taylor& b) { return Taylor(b.degree(), s) / b; }

 private:
  void harmonize(const Taylor& o) {
    if (o.degree() < degree()) c_.resize(o.c_.size());
  }

  std::vector<double> c_{0.0};
};

inline Taylor sqrt(const Taylor& a) {
  const int d = a.degree();
  assert(a[0] > 0.0);
  Taylor r(d);
  r[0] = std::sqrt(a[0]);
  for (int i = 1; i <= d; ++i) {
    double s = a[i];
    for (int j = 1; j < i; ++j) s -= r[j] * r[i - j];
    r[i] = s / (2.0 * r[0]);
  }
  return r;
}

inline Taylor exp(const Taylor& a) {
  const int d = a.degree();
  Taylor r(d);
  r[0] = std::exp(a[0]);
  // r' = a' r
  for (int i = 1; i <= d; ++i) {
    double s = 0.0;
    for (int j = 1; j <= i; ++j) s += j * a[j] * r[i - j];
    r[i] = s / i;
  }
  return r;
}

/// Simultaneous sine and cosine via s' = a' c, c' = -a' s.
inline void sincos(const Taylor& a, Taylor& s, Taylor& c) {
  const int d = a.degree();
  s = Taylor(d, std::sin(a[0]));
  c = Taylor(d, std::cos(a[0]));
  for (int i = 1; i <= d; ++i) {
    double ss = 0.0;
    double cc = 0.0;
    for (int j = 1; j <= i; ++j) {
      ss += j * a[j] * c[i - j];
      cc -= j * a[j] * s[i - j];
    }
    s[i] = ss / i;
    c[i] = cc / i;
  }
}

inline Taylor sin(const Taylor& a) {
  Taylor s, c;
  sincos(a, s, c);
  return s;
}

inline Taylor cos(const Taylor& a) {
  Taylor s, c;
  sincos(a, s, c);
  return c;
}

/// Integer power by repeated multiplication.
inline Taylor ipow(const Taylor& a, int n) {
  Taylor r(a.degree(), 1.0);
  for (int i = 0; i < n; ++i) r = r * a;
  return r;
}

}  // namespace blowup
