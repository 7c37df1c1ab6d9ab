#include "mixnorm/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>

namespace mixnorm {

Fft3::Fft3(const Grid3& grid) : grid_(grid) {
    const int n = grid_.n();
    nspec_ = std::int64_t(n) * n * (n / 2 + 1);
    rbuf_ = fftw_alloc_real(std::size_t(grid_.size()));
    cbuf_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(std::size_t(nspec_)));
    // FFTW row-major dims (z, y, x): the last dimension is our fastest (x).
    plan_fwd_ = fftw_plan_dft_r2c_3d(n, n, n, rbuf_, reinterpret_cast<fftw_complex*>(cbuf_),
                                     FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_3d(n, n, n, reinterpret_cast<fftw_complex*>(cbuf_), rbuf_,
                                     FFTW_ESTIMATE);
}

Fft3::~Fft3() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(rbuf_);
    fftw_free(cbuf_);
}

SpectralField Fft3::forward(const Eigen::ArrayXd& real) const {
    if (real.size() != grid_.size()) throw InvalidInput("Fft3::forward: size mismatch");
    std::memcpy(rbuf_, real.data(), std::size_t(grid_.size()) * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    SpectralField out(nspec_);
    std::memcpy(out.data(), cbuf_, std::size_t(nspec_) * sizeof(std::complex<double>));
    return out;
}

Eigen::ArrayXd Fft3::inverse(const SpectralField& spec) const {
    if (spec.size() != nspec_) throw InvalidInput("Fft3::inverse: size mismatch");
    std::memcpy(cbuf_, spec.data(), std::size_t(nspec_) * sizeof(std::complex<double>));
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    Eigen::ArrayXd out(grid_.size());
    const double scale = 1.0 / double(grid_.size());
    for (std::int64_t v = 0; v < grid_.size(); ++v) out[v] = rbuf_[v] * scale;
    return out;
}

void Fft3::dealias(SpectralField& spec) const {
    const int kcut = grid_.n() / 3;
    for_each_mode([&](std::int64_t s, int kx, int ky, int kz) {
        if (kx > kcut || std::abs(ky) > kcut || std::abs(kz) > kcut) spec[s] = 0.0;
    });
}

Fft3& fft_for(const Grid3& grid) {
    static std::map<std::pair<int, double>, std::unique_ptr<Fft3>> cache;
    auto key = std::make_pair(grid.n(), grid.L());
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<Fft3>(grid)).first;
    return *it->second;
}

}  // namespace mixnorm
