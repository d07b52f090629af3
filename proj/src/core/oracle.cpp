#include "core/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/error.hpp"
#include "core/taylor.hpp"

namespace blowup {

namespace {

constexpr int kMaxLog = 3;
constexpr double kZeroTol = 1e-9;

// Double series in (T, ln T) with Taylor-polynomial coefficients in xi.
using Key = std::pair<int, int>;
using BiSeries = std::map<Key, Taylor>;

void accumulate(BiSeries& s, Key k, const Taylor& c, double f = 1.0) {
  auto it = s.find(k);
  if (it == s.end()) {
    s.emplace(k, c * f);
  } else {
    it->second += c * f;
  }
}

BiSeries add(const BiSeries& a, const BiSeries& b, double fb = 1.0) {
  BiSeries r = a;
  for (const auto& [k, v] : b) accumulate(r, k, v, fb);
  return r;
}

BiSeries mul(const BiSeries& a, const BiSeries& b, int max_power) {
  BiSeries r;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) {
      const int m = ka.first + kb.first;
      if (m > max_power) continue;
      accumulate(r, {m, ka.second + kb.second}, va * vb);
    }
  return r;
}

BiSeries mul(const Taylor& p, const BiSeries& a) {
  BiSeries r;
  for (const auto& [k, v] : a) r.emplace(k, p * v);
  return r;
}

BiSeries d_T(const BiSeries& a) {
  BiSeries r;
  for (const auto& [k, v] : a) {
    const auto [m, l] = k;
    if (m != 0) accumulate(r, {m - 1, l}, v, m);
    if (l != 0) accumulate(r, {m - 1, l - 1}, v, l);
  }
  return r;
}

BiSeries d_xi(const BiSeries& a) {
  BiSeries r;
  for (const auto& [k, v] : a) r.emplace(k, v.differentiate());
  return r;
}

struct LocalProblem {
  Taylor gamma;
  Taylor psi_x;
  Taylor psi_xx;
  int degree = 0;

  // gamma U_TT - U_xixi + 2 psi_x U_xiT + psi_xx U_T - 2 U^3, kept up to T^max_power.
  BiSeries apply(const BiSeries& U, int max_power) const {
    const BiSeries ut = d_T(U);
    const BiSeries ux = d_xi(U);
    BiSeries r = mul(gamma, d_T(ut));
    r = add(r, d_xi(ux), -1.0);
    r = add(r, mul(psi_x * 2.0, d_T(ux)));
    r = add(r, mul(psi_xx, ut));
    int lowest = 0;
    for (const auto& [k, v] : U) lowest = std::min(lowest, k.first);
    const BiSeries u2 = mul(U, U, max_power - lowest);
    r = add(r, mul(u2, U, max_power), -2.0);
    BiSeries out;
    for (auto& [k, v] : r)
      if (k.first <= max_power) out.emplace(k, v);
    return out;
  }
};

Taylor coefficient_of(const BiSeries& s, Key k, int degree) {
  auto it = s.find(k);
  return it == s.end() ? Taylor(degree) : it->second;
}

double size_of(const Taylor& p) {
  double m = 0.0;
  for (int i = 0; i <= p.degree(); ++i) m = std::max(m, std::abs(p[i]));
  return m;
}

// Value-level magnitude: only the xi^0 coefficient is trusted to full precision.
double value_size(const Taylor& p) { return std::abs(p[0]); }

}  // namespace

Field OracleResult::coefficient(int k, int l) const {
  auto it = coefficients.find({k, l});
  if (it != coefficients.end()) return it->second;
  const std::size_t n = coefficients.empty() ? 0 : coefficients.begin()->second.size();
  return Field(n, 0.0);
}

OracleResult order_matching_oracle(const BlowupSurface& s, int max_order, const Profile& free_datum) {
  if (max_order < 0) throw Error(ErrorKind::InvalidConfig, "max_order must be nonnegative");
  const int n = s.size();
  const int degree = 2 * max_order + 6;
  OracleResult out;
  out.max_order = max_order;
  out.first_unmatched_power = std::numeric_limits<int>::max();
  for (int k = 0; k <= max_order; ++k)
    for (int l = 0; l <= kMaxLog; ++l) out.coefficients[{k, l}] = Field(static_cast<std::size_t>(n), 0.0);

  for (int j = 0; j < n; ++j) {
    const double x0 = s.grid().x(j);
    const Taylor xi = Taylor::variable(degree, x0);
    const Taylor psi = s.generator().evaluate(xi);
    LocalProblem lp;
    lp.degree = degree;
    lp.psi_x = psi.differentiate();
    lp.psi_xx = lp.psi_x.differentiate();
    lp.gamma = 1.0 - lp.psi_x * lp.psi_x;
    const Taylor datum = free_datum.evaluate(xi);

    BiSeries U;
    // Leading balance 2 gamma c - 2 c^3 = 0 at T^-3: the nonzero root is sqrt(gamma).
    U[{-1, 0}] = sqrt(lp.gamma);
    {
      const BiSeries r = lp.apply(U, -3);
      const double lead = value_size(coefficient_of(r, {-3, 0}, degree));
      if (lead > kZeroTol) throw Error(ErrorKind::ResonanceMismatch, "leading balance not satisfied");
    }

    for (int k = 1; k <= max_order; ++k) {
      const int target = k - 3;
      const Taylor one(degree, 1.0);

      BiSeries base = lp.apply(U, target);
      double scale = 1.0;
      for (const auto& [key, v] : base)
        if (key.first == target) scale = std::max(scale, value_size(v));
      BiSeries probe = U;
      accumulate(probe, {k - 1, 0}, one);
      const BiSeries probed = lp.apply(probe, target);
      const Taylor indicial = coefficient_of(probed, {target, 0}, degree) - coefficient_of(base, {target, 0}, degree);

      const bool resonant = size_of(indicial.truncated(2)) < kZeroTol;
      if (resonant) {
        if (out.resonant_order < 0) out.resonant_order = k;
        accumulate(U, {k - 1, 0}, datum);
        for (int l = kMaxLog; l >= 0; --l) {
          base = lp.apply(U, target);
          const Taylor res = coefficient_of(base, {target, l}, degree);
          if (value_size(res) <= kZeroTol && size_of(res.truncated(2)) <= kZeroTol) continue;
          if (l + 1 > kMaxLog) throw Error(ErrorKind::ResonanceMismatch, "no log slot left at resonant order");
          BiSeries lp_probe = U;
          accumulate(lp_probe, {k - 1, l + 1}, one);
          const BiSeries lp_out = lp.apply(lp_probe, target);
          const Taylor factor = coefficient_of(lp_out, {target, l}, degree) - res;
          if (size_of(factor.truncated(0)) < kZeroTol) throw Error(ErrorKind::ResonanceMismatch, "log probe is degenerate");
          accumulate(U, {k - 1, l + 1}, res / factor, -1.0);
        }
      } else {
        for (int l = kMaxLog; l >= 0; --l) {
          base = lp.apply(U, target);
          const Taylor res = coefficient_of(base, {target, l}, degree);
          if (size_of(res) == 0.0) continue;
          accumulate(U, {k - 1, l}, res / indicial, -1.0);
        }
      }

      base = lp.apply(U, target);
      for (int l = 0; l <= kMaxLog + 2; ++l) {
        const double left = value_size(coefficient_of(base, {target, l}, degree));
        if (left > 1e-10 * scale) {
          std::ostringstream os;
          os << "order " << k << " log power " << l << " left residual " << left << " (scale " << scale << ") at x = " << x0;
          throw Error(ErrorKind::ResonanceMismatch, os.str());
        }
      }
    }

    for (int k = 0; k <= max_order; ++k)
      for (int l = 0; l <= kMaxLog; ++l) {
        auto it = U.find({k - 1, l});
        if (it != U.end()) out.coefficients[{k, l}][static_cast<std::size_t>(j)] = it->second[0];
      }

    // First order left unmatched by the truncation u0..u3, u41 (free datum dropped).
    BiSeries truncated;
    for (const auto& [key, v] : U) {
      const int k = key.first + 1;
      if (k <= 3 || (k == 4 && key.second >= 1)) truncated.emplace(key, v);
    }
    const int probe_top = std::max(4, max_order - 3);
    const BiSeries r = lp.apply(truncated, probe_top);
    for (int m = -3; m <= probe_top; ++m) {
      int top_log = -1;
      for (int l = 0; l <= 2 * kMaxLog + 3; ++l)
        if (value_size(coefficient_of(r, {m, l}, degree)) > 1e-10) top_log = l;
      if (top_log >= 0) {
        if (m < out.first_unmatched_power) {
          out.first_unmatched_power = m;
          out.first_unmatched_log_power = top_log;
        } else if (m == out.first_unmatched_power) {
          out.first_unmatched_log_power = std::max(out.first_unmatched_log_power, top_log);
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace blowup
