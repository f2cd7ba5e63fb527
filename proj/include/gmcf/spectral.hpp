#pragma once

#include <complex>
#include <span>
#include <vector>

#include "gmcf/grid.hpp"

namespace gmcf {

// Fourier-spectral differentiation workspace for one grid. Holds the FFTW
// plans and buffers; transforms are deterministic (FFTW_ESTIMATE plans) so
// repeated runs are bit-identical.
//
// Derivatives of odd order zero out the Nyquist modes of the differentiated
// axis; even orders keep them. Derivatives of resolved modes are exact at
// the grid points.
class Spectral {
 public:
  explicit Spectral(const PeriodicGrid& grid);
  ~Spectral();

  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const PeriodicGrid& grid() const { return grid_; }

  // Number of complex coefficients of the real-to-complex transform.
  int spectrum_size() const { return n2_ * (n1_ / 2 + 1); }

  void forward(std::span<const double> field, std::vector<std::complex<double>>& spectrum);

  // out = d^(d1+d2) field / dx1^d1 dx2^d2, from a spectrum produced by forward().
  void derivative(const std::vector<std::complex<double>>& spectrum, int d1, int d2,
                  std::span<double> out);

 private:
  PeriodicGrid grid_;
  int n1_ = 0;
  int n2_ = 0;
  double* real_buf_ = nullptr;
  void* cplx_buf_ = nullptr;  // fftw_complex*
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
  std::vector<double> k1_;  // wavenumbers along axis 1 (r2c layout, 0..n1/2)
  std::vector<double> k2_;  // wavenumbers along axis 2 (full, signed)
};

// Shared per-grid workspace (thread-local cache keyed by the grid).
Spectral& spectral_for(const PeriodicGrid& grid);

// Convenience wrappers (allocate internally; hot paths keep their own spectra).
std::vector<double> spectral_derivative(const PeriodicGrid& grid, std::span<const double> field,
                                        int d1, int d2);

}  // namespace gmcf
