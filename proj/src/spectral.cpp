#include "gmcf/spectral.hpp"

#include <fftw3.h>

#include <cassert>
#include <cstring>
#include <map>
#include <memory>
#include <numbers>
#include <tuple>

namespace gmcf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Spectral::Spectral(const PeriodicGrid& grid) : grid_(grid), n1_(grid.n1), n2_(grid.n2) {
  require_valid(grid);
  const int nc = spectrum_size();
  real_buf_ = fftw_alloc_real(static_cast<size_t>(n1_) * n2_);
  cplx_buf_ = fftw_alloc_complex(static_cast<size_t>(nc));
  // Storage is idx = j*n1 + i (i fastest), i.e. a row-major [n2][n1] array,
  // so FFTW's "last dimension" is axis 1. ESTIMATE keeps plan selection
  // deterministic across runs.
  plan_fwd_ = fftw_plan_dft_r2c_2d(n2_, n1_, real_buf_, static_cast<fftw_complex*>(cplx_buf_),
                                   FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_c2r_2d(n2_, n1_, static_cast<fftw_complex*>(cplx_buf_), real_buf_,
                                   FFTW_ESTIMATE);

  k1_.resize(n1_ / 2 + 1);
  for (int m = 0; m <= n1_ / 2; ++m) k1_[m] = kTwoPi * m / grid.L1;
  k2_.resize(n2_);
  for (int m = 0; m < n2_; ++m) {
    const int q = (m <= n2_ / 2) ? m : m - n2_;
    k2_[m] = kTwoPi * q / grid.L2;
  }
}

Spectral::~Spectral() {
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  fftw_free(real_buf_);
  fftw_free(cplx_buf_);
}

void Spectral::forward(std::span<const double> field, std::vector<std::complex<double>>& spectrum) {
  assert(static_cast<int>(field.size()) == grid_.size());
  std::memcpy(real_buf_, field.data(), field.size() * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  spectrum.resize(static_cast<size_t>(spectrum_size()));
  std::memcpy(spectrum.data(), cplx_buf_, spectrum.size() * sizeof(std::complex<double>));
}

void Spectral::derivative(const std::vector<std::complex<double>>& spectrum, int d1, int d2,
                          std::span<double> out) {
  assert(static_cast<int>(spectrum.size()) == spectrum_size());
  assert(static_cast<int>(out.size()) == grid_.size());
  const int nc1 = n1_ / 2 + 1;
  const double scale = 1.0 / (static_cast<double>(n1_) * n2_);
  auto* buf = static_cast<fftw_complex*>(cplx_buf_);

  for (int j = 0; j < n2_; ++j) {
    // Odd derivative orders drop the Nyquist mode of their axis (its
    // first derivative has no consistent sign in the real representation).
    double f2 = 1.0;
    if (d2 > 0) {
      const double k = (j == n2_ / 2 && d2 % 2 == 1) ? 0.0 : k2_[j];
      f2 = 1.0;
      for (int p = 0; p < d2; ++p) f2 *= k;
    }
    for (int m = 0; m < nc1; ++m) {
      double f1 = 1.0;
      if (d1 > 0) {
        const double k = (m == n1_ / 2 && d1 % 2 == 1) ? 0.0 : k1_[m];
        for (int p = 0; p < d1; ++p) f1 *= k;
      }
      // multiplier = (i k1)^d1 (i k2)^d2 = i^(d1+d2) * f1 * f2
      const int order = d1 + d2;
      double re_mul = f1 * f2 * scale;
      double im_mul = 0.0;
      switch (order % 4) {
        case 0: break;
        case 1: im_mul = re_mul; re_mul = 0.0; break;
        case 2: re_mul = -re_mul; break;
        case 3: im_mul = -re_mul; re_mul = 0.0; break;
      }
      const std::complex<double> c = spectrum[static_cast<size_t>(j) * nc1 + m];
      const size_t at = static_cast<size_t>(j) * nc1 + m;
      buf[at][0] = c.real() * re_mul - c.imag() * im_mul;
      buf[at][1] = c.real() * im_mul + c.imag() * re_mul;
    }
  }

  fftw_execute(static_cast<fftw_plan>(plan_inv_));
  std::memcpy(out.data(), real_buf_, out.size() * sizeof(double));
}

Spectral& spectral_for(const PeriodicGrid& grid) {
  using Key = std::tuple<int, int, double, double>;
  thread_local std::map<Key, std::unique_ptr<Spectral>> cache;
  const Key key{grid.n1, grid.n2, grid.L1, grid.L2};
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<Spectral>(grid)).first;
  }
  return *it->second;
}

std::vector<double> spectral_derivative(const PeriodicGrid& grid, std::span<const double> field,
                                        int d1, int d2) {
  Spectral& sp = spectral_for(grid);
  std::vector<std::complex<double>> spectrum;
  sp.forward(field, spectrum);
  std::vector<double> out(static_cast<size_t>(grid.size()));
  sp.derivative(spectrum, d1, d2, out);
  return out;
}

}  // namespace gmcf
