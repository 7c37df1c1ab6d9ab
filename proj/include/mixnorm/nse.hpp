#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixnorm/fft.hpp"
#include "mixnorm/field.hpp"
#include "mixnorm/lp.hpp"

namespace mixnorm {

/// Root of (1/2)h + (1-h)M = 1 with
/// h = (2/pi) arcsin((1-(3/4)^(2/3)) / (1+(3/4)^(2/3))); M > 1.
double compute_M();

struct MonitorConstants {
    double M = 0.0;           // compute_M() unless overridden
    double C_M = 1.0;         // analyticity constants; not derivable, config-supplied
    double Ctilde_M = 1.0;
    double c_star = 1.0;      // from calibration

    double m0() const { return c_star / (2.0 * C_M * Ctilde_M); }
    void validate() const;
};

/// Spectral state of the unforced incompressible solver; coefficients are
/// dealiased and divergence-free at all times.
struct NseState {
    Grid3 grid;
    std::array<SpectralField, 3> u_hat;
    double t = 0.0;
    double nu = 1.0;

    explicit NseState(const Grid3& g, double viscosity = 1.0);
    static NseState from_physical(const VectorField& u, double nu, double t0 = 0.0);
    VectorField to_physical() const;

    double max_relative_divergence() const;
    double energy() const;  // ||u||_2^2
};

/// u_hat <- u_hat - xi (xi . u_hat) / |xi|^2; mean mode untouched.
void leray_project(const Fft3& fft, std::array<SpectralField, 3>& u_hat);

/// One integrating-factor RK4 step; nonlinear term in rotational form,
/// dealiased and projected. Throws StepRejected on CFL violation.
void step(NseState& state, double dt);

struct MonitorRecord {
    double t = 0.0;
    double linf = 0.0;
    double besov_m1 = 0.0;
    double besov_0 = 0.0;
    double scale = 0.0;                 // min(1/(2 C Ct linf), L/4)
    std::array<double, 6> fractions{};  // semi-mixed max fractions, A^{1,+},A^{1,-},...,A^{3,-}
    bool smallness = false;
    bool nonsmallness = false;
    bool sparsity = false;
    bool scale_clamped = false;
};

/// Fills a MonitorRecord; empty when the field vanishes.
std::optional<MonitorRecord> monitor_snapshot(const VectorField& u,
                                              const MonitorConstants& consts,
                                              const LPBank& bank,
                                              bool subtract_mean = false);

struct SimConfig {
    int n = 32;
    double L = 2.0 * M_PI;
    double nu = 1.0;
    double dt = 1e-3;
    double t_end = 1.0;
    int cadence = 100;                 // monitor every this many steps
    std::string preset = "shear";      // shear | taylor-green | random-band | zero
    std::string input_path;            // BSF1 initial data, overrides preset
    std::uint64_t seed = 1;            // random-band preset
    MonitorConstants consts;
    bool subtract_mean = false;
    std::string snapshot_dir;          // BSF1 snapshots when nonempty
    int snapshot_every = 0;
};

struct EscapeTime {
    int index = 0;
    double t = 0.0;
    double s_lo = 0.0, s_hi = 0.0;  // Duhamel window [t + 1/(4C^2 linf^2), t + 1/(C^2 linf^2)]
};

struct Trajectory {
    SimConfig config;
    std::vector<MonitorRecord> records;
    double final_time = 0.0;
    int steps = 0;
};

VectorField make_preset(const std::string& name, const Grid3& grid, std::uint64_t seed = 1);

Trajectory simulate(const SimConfig& config);

/// Discrete escape times: record k is one iff linf(t_k) < linf(t_j) for all j > k
/// (last record excluded; no later time exists).
std::vector<int> escape_time_indices(const std::vector<double>& linf_series);
std::vector<EscapeTime> find_escape_times(const Trajectory& traj);

}  // namespace mixnorm
