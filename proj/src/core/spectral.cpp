#include "core/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "core/error.hpp"

namespace blowup {

namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  double* in = fftw_alloc_real(static_cast<std::size_t>(n));
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
  PlanPair p;
  p.r2c = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
  p.c2r = fftw_plan_dft_c2r_1d(n, out, in, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  return cache.emplace(n, p).first->second;
}

struct RealBuffer {
  explicit RealBuffer(int n) : data(fftw_alloc_real(static_cast<std::size_t>(n))) {}
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
};

struct ComplexBuffer {
  explicit ComplexBuffer(int n) : data(fftw_alloc_complex(static_cast<std::size_t>(n))) {}
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

Spectral::Spectral(const GridSpec& grid) : grid_(grid), n_(grid.points) { grid.validate(); }

double Spectral::wavenumber(int m) const { return 2.0 * std::numbers::pi * m / grid_.length; }

std::vector<std::complex<double>> Spectral::forward(const Field& f) const {
  if (static_cast<int>(f.size()) != n_) throw Error(ErrorKind::InvalidConfig, "field size does not match grid");
  const auto& p = plans_for(n_);
  RealBuffer in(n_);
  ComplexBuffer out(n_ / 2 + 1);
  std::copy(f.begin(), f.end(), in.data);
  fftw_execute_dft_r2c(p.r2c, in.data, out.data);
  std::vector<std::complex<double>> c(static_cast<std::size_t>(n_ / 2 + 1));
  const double inv = 1.0 / n_;
  for (std::size_t m = 0; m < c.size(); ++m) c[m] = {out.data[m][0] * inv, out.data[m][1] * inv};
  return c;
}

Field Spectral::backward(const std::vector<std::complex<double>>& coeffs) const {
  const auto& p = plans_for(n_);
  ComplexBuffer in(n_ / 2 + 1);
  RealBuffer out(n_);
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    in.data[m][0] = coeffs[m].real();
    in.data[m][1] = coeffs[m].imag();
  }
  fftw_execute_dft_c2r(p.c2r, in.data, out.data);
  return Field(out.data, out.data + n_);
}

Field Spectral::derivative(const Field& f, int order) const {
  auto c = forward(f);
  const std::complex<double> i(0.0, 1.0);
  for (int m = 0; m < static_cast<int>(c.size()); ++m) {
    const double k = wavenumber(m);
    c[static_cast<std::size_t>(m)] *= std::pow(i * k, order);
  }
  if (n_ % 2 == 0 && order % 2 == 1) c.back() = 0.0;
  return backward(c);
}

Field Spectral::apply_S(const Field& f, double s) const {
  auto c = forward(f);
  for (int m = 0; m < static_cast<int>(c.size()); ++m) {
    const double k = wavenumber(m);
    c[static_cast<std::size_t>(m)] *= std::pow(1.0 + k * k, 0.5 * s);
  }
  return backward(c);
}

double Spectral::sobolev_norm(const Field& f, double s) const {
  const auto c = forward(f);
  double sum = 0.0;
  const int last = static_cast<int>(c.size()) - 1;
  for (int m = 0; m <= last; ++m) {
    const double k = wavenumber(m);
    // Modes 1..ceil(N/2)-1 stand for a conjugate pair; DC and Nyquist do not.
    const bool paired = m > 0 && !(n_ % 2 == 0 && m == last);
    sum += (paired ? 2.0 : 1.0) * std::pow(1.0 + k * k, s) * std::norm(c[static_cast<std::size_t>(m)]);
  }
  return std::sqrt(grid_.length * sum);
}

double Spectral::cauchy_pair_norm(const Field& u, const Field& ut, double s0) const {
  return sobolev_norm(u, s0) + sobolev_norm(ut, s0 - 1.0);
}

Field Spectral::resample(const Field& f, int points) const {
  if (points == n_) return f;
  const auto c = forward(f);
  Spectral target(grid_.with_points(points));
  std::vector<std::complex<double>> d(static_cast<std::size_t>(points / 2 + 1), 0.0);
  const int keep = std::min(static_cast<int>(c.size()), static_cast<int>(d.size()));
  for (int m = 0; m < keep; ++m) d[static_cast<std::size_t>(m)] = c[static_cast<std::size_t>(m)];
  // A source Nyquist mode is split between +/- frequencies on a finer grid.
  if (n_ % 2 == 0 && points > n_) d[static_cast<std::size_t>(n_ / 2)] *= 0.5;
  if (points % 2 == 0 && points < n_) d.back() = {2.0 * d.back().real(), 0.0};
  return target.backward(d);
}

double l2_inner(const Field& f, const Field& g, double spacing) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * g[j];
  return s * spacing;
}

}  // namespace blowup
