#include "mixnorm/lp.hpp"

#include <cmath>

namespace mixnorm {

namespace {

// Quintic smoothstep.
double smooth01(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

// Radial low-pass: 1 for |xi| <= 3/4, 0 for |xi| >= 4/3, quintic in log2|xi|.
double lowpass(double xi) {
    if (xi <= 0.75) return 1.0;
    if (xi >= 4.0 / 3.0) return 0.0;
    const double t0 = std::log2(0.75), t1 = std::log2(4.0 / 3.0);
    return 1.0 - smooth01((std::log2(xi) - t0) / (t1 - t0));
}

}  // namespace

LPBank build_lp_bank(const Grid3& grid) {
    LPBank bank{grid};
    // Highest ring index: smallest j with (8/3) 2^j covering |xi| up to the
    // Nyquist scale n/2 * (2pi/L); for power-of-two n this is log2(n) - 2
    // rescaled by the box factor.
    const double kmax = (grid.n() / 2) * (2.0 * M_PI / grid.L());
    int jmax = 0;
    while ((8.0 / 3.0) * std::pow(2.0, jmax) < kmax) ++jmax;
    bank.jmax = jmax;

    Fft3& fft = fft_for(grid);
    const double kfac = 2.0 * M_PI / grid.L();
    bank.multipliers.assign(std::size_t(jmax + 2), Eigen::ArrayXd::Zero(fft.spectral_size()));
    fft.for_each_mode([&](std::int64_t s, int kx, int ky, int kz) {
        const double xi =
            kfac * std::sqrt(double(kx) * kx + double(ky) * ky + double(kz) * kz);
        double prev = lowpass(xi);  // chi(|xi| / 2^0) at j = -1
        bank.multipliers[0][s] = prev;
        for (int j = 0; j < jmax; ++j) {
            double next = lowpass(xi / std::pow(2.0, j + 1));
            bank.multipliers[std::size_t(j + 1)][s] = next - prev;
            prev = next;
        }
        bank.multipliers[std::size_t(jmax + 1)][s] = 1.0 - prev;  // closing block
    });
    return bank;
}

ScalarField lp_block(const ScalarField& f, const LPBank& bank, int j) {
    if (j < bank.jmin || j > bank.jmax) throw InvalidInput("lp_block: j out of range");
    if (f.grid != bank.grid) throw InvalidInput("lp_block: grid mismatch");
    Fft3& fft = fft_for(f.grid);
    SpectralField spec = fft.forward(f.data);
    fft.dealias(spec);
    spec *= bank.phi(j);
    return ScalarField(f.grid, fft.inverse(spec));
}

namespace {

BesovResult besov_one_component(const Eigen::ArrayXd& data, double s, const LPBank& bank,
                                bool subtract_mean, int comp) {
    Fft3& fft = fft_for(bank.grid);
    SpectralField spec = fft.forward(data);
    fft.dealias(spec);
    if (subtract_mean) spec[0] = 0.0;
    BesovResult best;
    best.attaining_component = comp;
    for (int j = bank.jmin; j <= bank.jmax; ++j) {
        SpectralField blk = spec * bank.phi(j);
        const double amp = fft.inverse(blk).abs().maxCoeff();
        const double val = std::pow(2.0, j * s) * amp;
        if (val > best.value) {
            best.value = val;
            best.attaining_j = j;
        }
    }
    return best;
}

}  // namespace

BesovResult besov_inf_inf(const ScalarField& f, double s, const LPBank& bank,
                          bool subtract_mean) {
    if (f.grid != bank.grid) throw InvalidInput("besov_inf_inf: grid mismatch");
    return besov_one_component(f.data, s, bank, subtract_mean, 0);
}

BesovResult besov_inf_inf(const VectorField& u, double s, const LPBank& bank,
                          bool subtract_mean) {
    if (u.grid != bank.grid) throw InvalidInput("besov_inf_inf: grid mismatch");
    BesovResult best;
    for (int c = 0; c < 3; ++c) {
        BesovResult r = besov_one_component(u.comp[c], s, bank, subtract_mean, c);
        if (r.value > best.value) best = r;
    }
    return best;
}

namespace {

// L1 norm of the first or second periodic difference along integer shift v.
double diff_l1(const ScalarField& f, int a, int b, int c, int order) {
    const int n = f.grid.n();
    std::vector<int> ia(n), ja(n), ka(n), ia2(n), ja2(n), ka2(n);
    for (int k = 0; k < n; ++k) {
        ia[k] = f.grid.wrap(k + a);
        ja[k] = f.grid.wrap(k + b);
        ka[k] = f.grid.wrap(k + c);
        ia2[k] = f.grid.wrap(k + 2 * a);
        ja2[k] = f.grid.wrap(k + 2 * b);
        ka2[k] = f.grid.wrap(k + 2 * c);
    }
    const double* d = f.data.data();
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const std::int64_t row0 = std::int64_t(n) * (j + std::int64_t(n) * k);
            const std::int64_t row1 = std::int64_t(n) * (ja[j] + std::int64_t(n) * ka[k]);
            if (order == 1) {
                for (int i = 0; i < n; ++i) sum += std::abs(d[ia[i] + row1] - d[i + row0]);
            } else {
                const std::int64_t row2 = std::int64_t(n) * (ja2[j] + std::int64_t(n) * ka2[k]);
                for (int i = 0; i < n; ++i)
                    sum += std::abs(d[ia2[i] + row2] - 2.0 * d[ia[i] + row1] + d[i + row0]);
            }
        }
    return sum * f.grid.voxel_measure();
}

}  // namespace

double besov_11_fd(const ScalarField& f, double eps, double hmax) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidInput("besov_11_fd: eps must be in (0,1]");
    if (!(hmax > 0.0 && hmax <= f.grid.L() / 4.0))
        throw InvalidInput("besov_11_fd: hmax must be in (0, L/4]");
    const int order = (eps == 1.0) ? 2 : 1;
    const double dx = f.grid.dx();
    const int mshift = int(std::lround(std::log2(f.grid.n() / 4.0)));

    // 26 lattice directions: axes, face diagonals, cube diagonals.
    std::vector<std::array<int, 3>> dirs;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c)
                if (a || b || c) dirs.push_back({a, b, c});

    // Raw modulus per shell, then a running sup from fine to coarse so that
    // omega(t) = sup over sampled |h| <= t.
    std::vector<double> omega(std::size_t(mshift + 1), 0.0);
    for (int m = mshift; m >= 0; --m) {
        const double t = hmax * std::pow(2.0, -m);
        double w = (m == mshift) ? 0.0 : omega[std::size_t(m + 1)];
        for (const auto& e : dirs) {
            const double elen = std::sqrt(double(e[0]) * e[0] + e[1] * e[1] + e[2] * e[2]) * dx;
            const int q = int(std::floor(t / elen));
            if (q < 1) continue;
            w = std::max(w, diff_l1(f, q * e[0], q * e[1], q * e[2], order));
        }
        omega[std::size_t(m)] = w;
    }

    double norm = l1_norm(f);
    for (int m = 0; m <= mshift; ++m) {
        const double t = hmax * std::pow(2.0, -m);
        norm += std::pow(t, -eps) * omega[std::size_t(m)] * std::log(2.0);
    }
    return norm;
}

double dual_lower_bound(const ScalarField& u, const ScalarField& f, double eps) {
    if (u.grid != f.grid) throw InvalidInput("dual_lower_bound: grid mismatch");
    const double denom = besov_11_fd(f, eps, f.grid.L() / 4.0);
    if (denom == 0.0)
        throw DegenerateTestFunction("dual_lower_bound: test function has zero norm");
    const double pairing = std::abs((u.data * f.data).sum()) * u.grid.voxel_measure();
    return pairing / denom;
}

}  // namespace mixnorm
