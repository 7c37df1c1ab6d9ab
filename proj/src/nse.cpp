#include "mixnorm/nse.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <random>

#include "mixnorm/field_io.hpp"
#include "mixnorm/sparse.hpp"

namespace mixnorm {

double compute_M() {
    const double p = std::pow(0.75, 2.0 / 3.0);
    const double h = (2.0 / M_PI) * std::asin((1.0 - p) / (1.0 + p));
    return (1.0 - 0.5 * h) / (1.0 - h);
}

void MonitorConstants::validate() const {
    if (!(M > 1.0)) throw InvalidInput("MonitorConstants: M must exceed 1");
    if (!(C_M > 0.0 && Ctilde_M > 0.0))
        throw InvalidInput("MonitorConstants: analyticity constants must be positive");
    if (!(c_star > 0.0)) throw InvalidInput("MonitorConstants: c_star must be positive");
}

NseState::NseState(const Grid3& g, double viscosity) : grid(g), nu(viscosity) {
    Fft3& fft = fft_for(grid);
    for (auto& c : u_hat) c = SpectralField::Zero(fft.spectral_size());
}

NseState NseState::from_physical(const VectorField& u, double nu_, double t0) {
    NseState st(u.grid, nu_);
    st.t = t0;
    Fft3& fft = fft_for(u.grid);
    for (int c = 0; c < 3; ++c) {
        st.u_hat[std::size_t(c)] = fft.forward(u.comp[std::size_t(c)]);
        fft.dealias(st.u_hat[std::size_t(c)]);
    }
    leray_project(fft, st.u_hat);
    return st;
}

VectorField NseState::to_physical() const {
    Fft3& fft = fft_for(grid);
    VectorField u(grid);
    for (int c = 0; c < 3; ++c) u.comp[std::size_t(c)] = fft.inverse(u_hat[std::size_t(c)]);
    return u;
}

double NseState::max_relative_divergence() const {
    Fft3& fft = fft_for(grid);
    const double kfac = 2.0 * M_PI / grid.L();
    double worst = 0.0;
    fft.for_each_mode([&](std::int64_t s, int kx, int ky, int kz) {
        const std::complex<double> uv[3] = {u_hat[0][s], u_hat[1][s], u_hat[2][s]};
        const double mag =
            std::sqrt(std::norm(uv[0]) + std::norm(uv[1]) + std::norm(uv[2]));
        if (mag == 0.0) return;
        const double div =
            std::abs(kfac * (double(kx) * uv[0] + double(ky) * uv[1] + double(kz) * uv[2]));
        const double kmag = kfac * std::sqrt(double(kx) * kx + double(ky) * ky + double(kz) * kz);
        if (kmag > 0.0) worst = std::max(worst, div / (kmag * mag));
    });
    return worst;
}

double NseState::energy() const {
    VectorField u = to_physical();
    return l2_norm_sq(u);
}

void leray_project(const Fft3& fft, std::array<SpectralField, 3>& u_hat) {
    fft.for_each_mode([&](std::int64_t s, int kx, int ky, int kz) {
        const double k2 = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        if (k2 == 0.0) return;  // mean mode
        const std::complex<double> kdotu =
            double(kx) * u_hat[0][s] + double(ky) * u_hat[1][s] + double(kz) * u_hat[2][s];
        const std::complex<double> q = kdotu / k2;
        u_hat[0][s] -= double(kx) * q;
        u_hat[1][s] -= double(ky) * q;
        u_hat[2][s] -= double(kz) * q;
    });
}

namespace {

using Spec3 = std::array<SpectralField, 3>;

// P(u x omega), dealiased: the rotational-form nonlinear term.
Spec3 nonlinear(const Fft3& fft, const Grid3& grid, const Spec3& u_hat) {
    const double kfac = 2.0 * M_PI / grid.L();
    Spec3 w_hat;
    for (auto& c : w_hat) c = SpectralField(fft.spectral_size());
    // vorticity in spectral space
    Spec3 om_hat = w_hat;
    fft.for_each_mode([&](std::int64_t s, int kx, int ky, int kz) {
        const std::complex<double> I(0.0, 1.0);
        om_hat[0][s] = I * kfac * (double(ky) * u_hat[2][s] - double(kz) * u_hat[1][s]);
        om_hat[1][s] = I * kfac * (double(kz) * u_hat[0][s] - double(kx) * u_hat[2][s]);
        om_hat[2][s] = I * kfac * (double(kx) * u_hat[1][s] - double(ky) * u_hat[0][s]);
    });
    std::array<Eigen::ArrayXd, 3> u, om;
    for (int c = 0; c < 3; ++c) {
        u[std::size_t(c)] = fft.inverse(u_hat[std::size_t(c)]);
        om[std::size_t(c)] = fft.inverse(om_hat[std::size_t(c)]);
    }
    const Eigen::ArrayXd wx = u[1] * om[2] - u[2] * om[1];
    const Eigen::ArrayXd wy = u[2] * om[0] - u[0] * om[2];
    const Eigen::ArrayXd wz = u[0] * om[1] - u[1] * om[0];
    w_hat[0] = fft.forward(wx);
    w_hat[1] = fft.forward(wy);
    w_hat[2] = fft.forward(wz);
    for (auto& c : w_hat) fft.dealias(c);
    leray_project(fft, w_hat);
    return w_hat;
}

}  // namespace

void step(NseState& state, double dt) {
    const Grid3& grid = state.grid;
    Fft3& fft = fft_for(grid);

    const double linf = linf_norm(state.to_physical());
    const double dx = grid.dx();
    const double dt_adv = 0.5 * dx / std::max(1.0, linf);
    const double dt_visc = state.nu > 0.0 ? 0.5 * dx * dx / state.nu
                                          : std::numeric_limits<double>::infinity();
    const double dt_ok = std::min(dt_adv, dt_visc);
    if (dt > dt_ok)
        throw StepRejected("step: dt violates the CFL bound; admissible dt = " +
                               std::to_string(dt_ok),
                           dt_ok);

    // integrating factors exp(-nu |xi|^2 dt) and the half-step variant
    const double kfac2 = std::pow(2.0 * M_PI / grid.L(), 2);
    Eigen::ArrayXd E(fft.spectral_size()), E2(fft.spectral_size());
    fft.for_each_mode([&](std::int64_t s, int kx, int ky, int kz) {
        const double k2 = kfac2 * (double(kx) * kx + double(ky) * ky + double(kz) * kz);
        E[s] = std::exp(-state.nu * k2 * dt);
        E2[s] = std::exp(-state.nu * k2 * dt * 0.5);
    });

    const Spec3& v = state.u_hat;
    Spec3 k1 = nonlinear(fft, grid, v);

    Spec3 stage;
    for (int c = 0; c < 3; ++c) stage[std::size_t(c)] = (v[std::size_t(c)] + 0.5 * dt * k1[std::size_t(c)]) * E2;
    Spec3 k2 = nonlinear(fft, grid, stage);

    for (int c = 0; c < 3; ++c) stage[std::size_t(c)] = v[std::size_t(c)] * E2 + 0.5 * dt * k2[std::size_t(c)];
    Spec3 k3 = nonlinear(fft, grid, stage);

    for (int c = 0; c < 3; ++c) stage[std::size_t(c)] = v[std::size_t(c)] * E + dt * (k3[std::size_t(c)] * E2);
    Spec3 k4 = nonlinear(fft, grid, stage);

    for (int c = 0; c < 3; ++c) {
        auto& uc = state.u_hat[std::size_t(c)];
        uc = uc * E + (dt / 6.0) * (k1[std::size_t(c)] * E + 2.0 * (k2[std::size_t(c)] + k3[std::size_t(c)]) * E2 +
                                    k4[std::size_t(c)]);
        fft.dealias(uc);
    }
    leray_project(fft, state.u_hat);
    state.t += dt;
}

std::optional<MonitorRecord> monitor_snapshot(const VectorField& u,
                                              const MonitorConstants& consts,
                                              const LPBank& bank, bool subtract_mean) {
    consts.validate();
    const double linf = linf_norm(u);
    if (linf == 0.0) return std::nullopt;

    MonitorRecord rec;
    rec.linf = linf;
    rec.besov_m1 = besov_inf_inf(u, -1.0, bank, subtract_mean).value;
    rec.besov_0 = besov_inf_inf(u, 0.0, bank, subtract_mean).value;
    const double r_crit = 1.0 / (2.0 * consts.C_M * consts.Ctilde_M * linf);
    rec.scale = std::min(r_crit, u.grid.L() / 4.0);
    rec.scale_clamped = r_crit > u.grid.L() / 4.0;

    int idx = 0;
    bool all_sparse = true;
    for (int i = 1; i <= 3; ++i)
        for (Sign s : {Sign::Plus, Sign::Minus}) {
            LevelSet A = component_superlevel(u, i, s, 0.5);
            const double frac = semi_mixed(A, rec.scale, 0.75).ratio;
            rec.fractions[std::size_t(idx++)] = frac;
            all_sparse = all_sparse && frac <= 0.75;
        }
    rec.sparsity = all_sparse;
    rec.smallness = rec.besov_m1 <= consts.m0();
    if (rec.smallness) {
        // smallness predicts semi-mixedness of every set; a violation points
        // at a miscalibrated c_star and must not pass silently
        for (double f : rec.fractions)
            if (f > 0.75 + 0.02)
                std::cerr << "warning: lemma-calibration incident: smallness holds but a "
                             "level-set ball fraction is "
                          << f << "\n";
    }
    const double cc = consts.c_star * consts.c_star /
                      (4.0 * consts.C_M * consts.C_M * consts.Ctilde_M * consts.Ctilde_M);
    rec.nonsmallness = rec.besov_0 > 0.0 && rec.besov_m1 <= cc * linf / rec.besov_0;
    return rec;
}

VectorField make_preset(const std::string& name, const Grid3& grid, std::uint64_t seed) {
    VectorField u(grid);
    const int n = grid.n();
    if (name == "zero") {
        return u;
    } else if (name == "shear") {
        // u = (sin(x2), 0, 0): the nonlinear term vanishes identically
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    u.comp[0][grid.index(i, j, k)] = std::sin(2.0 * M_PI / grid.L() * grid.coord(j));
        return u;
    } else if (name == "taylor-green") {
        const double kf = 2.0 * M_PI / grid.L();
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const double x = kf * grid.coord(i), y = kf * grid.coord(j),
                                 z = kf * grid.coord(k);
                    const std::int64_t v = grid.index(i, j, k);
                    u.comp[0][v] = std::sin(x) * std::cos(y) * std::cos(z);
                    u.comp[1][v] = -std::cos(x) * std::sin(y) * std::cos(z);
                }
        return u;
    } else if (name == "random-band") {
        // random divergence-free field supported in 2 <= |k| <= 6
        Fft3& fft = fft_for(grid);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::array<SpectralField, 3> u_hat;
        for (auto& c : u_hat) c = SpectralField::Zero(fft.spectral_size());
        fft.for_each_mode([&](std::int64_t s, int kx, int ky, int kz) {
            const double kk = std::sqrt(double(kx) * kx + double(ky) * ky + double(kz) * kz);
            if (kk < 2.0 || kk > 6.0) return;
            for (int c = 0; c < 3; ++c)
                u_hat[std::size_t(c)][s] = std::complex<double>(gauss(rng), gauss(rng));
        });
        leray_project(fft, u_hat);
        for (int c = 0; c < 3; ++c) u.comp[std::size_t(c)] = fft.inverse(u_hat[std::size_t(c)]);
        const double amp = linf_norm(u);
        if (amp > 0.0)
            for (auto& cdata : u.comp) cdata /= amp;
        return u;
    }
    throw InvalidInput("unknown preset '" + name + "'");
}

Trajectory simulate(const SimConfig& config) {
    if (!(config.dt > 0.0)) throw InvalidInput("simulate: dt must be positive");
    if (!(config.t_end >= 0.0)) throw InvalidInput("simulate: t_end must be non-negative");
    if (!(config.nu > 0.0)) throw InvalidInput("simulate: nu must be positive");
    if (config.cadence < 1) throw InvalidInput("simulate: cadence must be >= 1");
    config.consts.validate();
    Grid3 grid(config.n, config.L);
    VectorField u0 = config.input_path.empty()
                         ? make_preset(config.preset, grid, config.seed)
                         : read_vector_field(config.input_path);
    if (u0.grid != grid) throw InvalidInput("simulate: initial data grid mismatch");

    NseState state = NseState::from_physical(u0, config.nu);
    LPBank bank = build_lp_bank(grid);

    Trajectory traj;
    traj.config = config;
    const int nsteps = int(std::lround(config.t_end / config.dt));

    auto emit = [&](int k) {
        auto rec = monitor_snapshot(state.to_physical(), config.consts, bank,
                                    config.subtract_mean);
        if (rec) {
            rec->t = state.t;
            traj.records.push_back(*rec);
        }
        if (!config.snapshot_dir.empty() && config.snapshot_every > 0 &&
            k % config.snapshot_every == 0) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_%06d.bsf1", k);
            write_field(state.to_physical(), config.snapshot_dir + "/" + name);
        }
    };

    emit(0);
    for (int k = 1; k <= nsteps; ++k) {
        step(state, config.dt);
        if (k % config.cadence == 0 || k == nsteps) emit(k);
    }
    traj.final_time = state.t;
    traj.steps = nsteps;
    return traj;
}

std::vector<int> escape_time_indices(const std::vector<double>& linf_series) {
    std::vector<int> out;
    if (linf_series.size() < 2) return out;
    // suffix minimum over strictly later samples; last sample has no later time
    double suffix_min = linf_series.back();
    std::vector<double> min_after(linf_series.size());
    for (std::size_t k = linf_series.size() - 1; k-- > 0;) {
        min_after[k] = suffix_min;
        suffix_min = std::min(suffix_min, linf_series[k]);
    }
    for (std::size_t k = 0; k + 1 < linf_series.size(); ++k)
        if (linf_series[k] < min_after[k]) out.push_back(int(k));
    return out;
}

std::vector<EscapeTime> find_escape_times(const Trajectory& traj) {
    std::vector<double> series;
    for (const auto& r : traj.records) series.push_back(r.linf);
    std::vector<EscapeTime> out;
    const double C = traj.config.consts.C_M;
    for (int k : escape_time_indices(series)) {
        const MonitorRecord& r = traj.records[std::size_t(k)];
        EscapeTime e;
        e.index = k;
        e.t = r.t;
        const double denom = C * C * r.linf * r.linf;
        e.s_lo = r.t + 1.0 / (4.0 * denom);
        e.s_hi = r.t + 1.0 / denom;
        out.push_back(e);
    }
    return out;
}

}  // namespace mixnorm
