#pragma once

#include <Eigen/Core>
#include <complex>

#include "mixnorm/grid.hpp"

namespace mixnorm {

using SpectralField = Eigen::ArrayXcd;

/// Real-to-complex 3D FFT on a Grid3. Spectral layout: kx = 0..n/2 fastest,
/// then ky, kz full range; linear index kx + (n/2+1)*(ky + n*kz).
/// Forward is the raw DFT sum; inverse applies the 1/n^3 normalization.
///
/// Instances hold FFTW plans and scratch buffers and are not thread-safe;
/// use one instance per thread.
class Fft3 {
  public:
    explicit Fft3(const Grid3& grid);
    ~Fft3();
    Fft3(const Fft3&) = delete;
    Fft3& operator=(const Fft3&) = delete;

    const Grid3& grid() const { return grid_; }
    std::int64_t spectral_size() const { return nspec_; }

    SpectralField forward(const Eigen::ArrayXd& real) const;
    Eigen::ArrayXd inverse(const SpectralField& spec) const;

    /// Signed integer frequency for transform index m along a full axis.
    int freq(int m) const { return m <= grid_.n() / 2 ? m : m - grid_.n(); }

    /// Calls fn(linear_index, kx, ky, kz) for every retained mode
    /// (kx >= 0 half-space; ky, kz signed).
    template <typename Fn>
    void for_each_mode(Fn&& fn) const {
        const int n = grid_.n();
        const int nxh = n / 2 + 1;
        std::int64_t s = 0;
        for (int kz = 0; kz < n; ++kz)
            for (int ky = 0; ky < n; ++ky)
                for (int kx = 0; kx < nxh; ++kx, ++s) fn(s, kx, freq(ky), freq(kz));
    }

    /// Zeroes modes with any |k_i| > n/3 (the 2/3 rule).
    void dealias(SpectralField& spec) const;

  private:
    Grid3 grid_;
    std::int64_t nspec_;
    void* plan_fwd_;
    void* plan_inv_;
    double* rbuf_;
    std::complex<double>* cbuf_;
};

/// Shared per-resolution FFT instances (single-threaded use).
Fft3& fft_for(const Grid3& grid);

}  // namespace mixnorm
