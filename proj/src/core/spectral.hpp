#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "core/grid.hpp"

namespace blowup {

/// Fourier tools on a 1-D periodic grid: derivatives, the multiplier
/// S = (1 - Laplacian)^{s/2}, discrete Sobolev norms and band-limited resampling.
///
/// Coefficients are normalized by 1/N, so the s = 0 norm reproduces the
/// continuum L2 norm over the box. Thread-safe; FFTW plans are cached per size.
class Spectral {
 public:
  explicit Spectral(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  int size() const { return n_; }

  /// Wavenumber of mode m in [0, N/2].
  double wavenumber(int m) const;

  std::vector<std::complex<double>> forward(const Field& f) const;
  Field backward(const std::vector<std::complex<double>>& coeffs) const;

  /// d^order f / dx^order; the Nyquist mode is dropped for odd orders.
  Field derivative(const Field& f, int order = 1) const;
  Field apply_S(const Field& f, double s) const;
  double sobolev_norm(const Field& f, double s) const;
  /// ‖u‖_{s0} + ‖ut‖_{s0-1}.
  double cauchy_pair_norm(const Field& u, const Field& ut, double s0) const;

  /// Fourier interpolation onto `points` equispaced nodes of the same box.
  Field resample(const Field& f, int points) const;

 private:
  GridSpec grid_;
  int n_;
};

/// Trapezoid-rule L2 inner product over the box.
double l2_inner(const Field& f, const Field& g, double spacing);

}  // namespace blowup
