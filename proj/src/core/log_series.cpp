#include "core/log_series.hpp"

#include <cmath>

#include "core/error.hpp"

namespace blowup {

LogSeries LogSeries::monomial(const Field& coeff, int power, int log_power) {
  LogSeries s(coeff.size());
  s.terms_.emplace(Key{power, log_power}, coeff);
  return s;
}

Field LogSeries::coefficient(int m, int l) const {
  auto it = terms_.find({m, l});
  return it == terms_.end() ? Field(points_, 0.0) : it->second;
}

void LogSeries::add_term(int m, int l, const Field& c, double factor) {
  if (points_ == 0) points_ = c.size();
  if (c.size() != points_) throw Error(ErrorKind::InvalidConfig, "series coefficient size mismatch");
  auto [it, inserted] = terms_.try_emplace(Key{m, l}, points_, 0.0);
  Field& dst = it->second;
  for (std::size_t j = 0; j < points_; ++j) dst[j] += factor * c[j];
}

int LogSeries::min_power() const {
  int m = std::numeric_limits<int>::max();
  for (const auto& [k, v] : terms_) m = std::min(m, k.first);
  return m;
}

int LogSeries::max_power() const {
  int m = std::numeric_limits<int>::min();
  for (const auto& [k, v] : terms_) m = std::max(m, k.first);
  return m;
}

int LogSeries::max_log_power() const {
  int m = 0;
  for (const auto& [k, v] : terms_) m = std::max(m, k.second);
  return m;
}

LogSeries& LogSeries::operator+=(const LogSeries& o) {
  for (const auto& [k, v] : o.terms_) add_term(k.first, k.second, v);
  return *this;
}

LogSeries& LogSeries::operator-=(const LogSeries& o) {
  for (const auto& [k, v] : o.terms_) add_term(k.first, k.second, v, -1.0);
  return *this;
}

LogSeries& LogSeries::operator*=(double s) {
  for (auto& [k, v] : terms_)
    for (double& x : v) x *= s;
  return *this;
}

LogSeries LogSeries::times(const LogSeries& o, int max_power) const {
  LogSeries r(std::max(points_, o.points_));
  Field prod(r.points_);
  for (const auto& [ka, va] : terms_) {
    for (const auto& [kb, vb] : o.terms_) {
      const int m = ka.first + kb.first;
      if (m > max_power) continue;
      for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = va[j] * vb[j];
      r.add_term(m, ka.second + kb.second, prod);
    }
  }
  return r;
}

LogSeries LogSeries::times(const Field& f) const {
  LogSeries r(points_);
  for (const auto& [k, v] : terms_) {
    Field p(v);
    for (std::size_t j = 0; j < p.size(); ++j) p[j] *= f[j];
    r.terms_.emplace(k, std::move(p));
  }
  return r;
}

LogSeries LogSeries::shifted(int k) const {
  LogSeries r(points_);
  for (const auto& [key, v] : terms_) r.terms_.emplace(Key{key.first + k, key.second}, v);
  return r;
}

LogSeries LogSeries::dT() const {
  // d/dT [T^m L^l] = m T^{m-1} L^l + l T^{m-1} L^{l-1}
  LogSeries r(points_);
  for (const auto& [k, v] : terms_) {
    const auto [m, l] = k;
    if (m != 0) r.add_term(m - 1, l, v, m);
    if (l != 0) r.add_term(m - 1, l - 1, v, l);
  }
  return r;
}

LogSeries LogSeries::D() const {
  LogSeries r(points_);
  for (const auto& [k, v] : terms_) {
    const auto [m, l] = k;
    if (m != 0) r.add_term(m, l, v, m);
    if (l != 0) r.add_term(m, l - 1, v, l);
  }
  return r;
}

LogSeries LogSeries::map(const std::function<Field(const Field&)>& fn) const {
  LogSeries r(points_);
  for (const auto& [k, v] : terms_) r.terms_.emplace(k, fn(v));
  return r;
}

LogSeries LogSeries::band(int lo, int hi) const {
  LogSeries r(points_);
  for (const auto& [k, v] : terms_)
    if (k.first >= lo && k.first <= hi) r.terms_.emplace(k, v);
  return r;
}

Field LogSeries::evaluate(double T) const {
  Field out(points_, 0.0);
  const double lnT = std::log(T);
  for (const auto& [k, v] : terms_) {
    const double w = std::pow(T, k.first) * std::pow(lnT, k.second);
    for (std::size_t j = 0; j < points_; ++j) out[j] += w * v[j];
  }
  return out;
}

double LogSeries::evaluate_at(std::size_t j, double T) const {
  const double lnT = std::log(T);
  double s = 0.0;
  for (const auto& [k, v] : terms_) s += std::pow(T, k.first) * std::pow(lnT, k.second) * v[j];
  return s;
}

}  // namespace blowup
