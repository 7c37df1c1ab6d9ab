#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mixnorm/field.hpp"
#include "mixnorm/lp.hpp"
#include "mixnorm/sparse.hpp"

namespace mixnorm {

/// Parameters of the mixing lemma instance, with the derived bump margin eta
/// solving (1+eta)^3 = (delta(1+lambda)+1)/2 and the constant
/// c(lambda,delta) = c_star * (delta(1+lambda)-1)/2.
struct MixingParams {
    double lambda = 0.5;
    double delta = 0.75;
    double eps = 1.0;
    double eta = 0.0;
    double c_star = 1.0;
    double c_lambda_delta = 0.0;
};

MixingParams mixing_constant(double lambda, double delta, double eps, double c_star);

/// Radial cutoff: 1 on B(x0,r), 0 outside B(x0,(1+eta)r), quintic transition.
ScalarField build_cutoff(const std::array<double, 3>& x0, double r, double eta,
                         const Grid3& grid);

/// Empirical calibration of the constants the paper leaves abstract.
/// c_duality is the largest c with besov(u,-eps) >= c |<u,f>| / ||f||_B over
/// the trial family; c_eta bounds the cutoff norm ||f||_B <= c_eta r^(3-eps);
/// c_star = safety * c_duality * Pi(3) / c_eta is the lemma-chain constant.
struct Calibration {
    double c_star = 0.0;
    double c_duality = 0.0;
    double c_eta = 0.0;
    double eta = 0.0;
    double eps = 1.0;
    std::uint64_t seed = 0;
    int trials = 0;
    int grid_n = 0;
    double grid_L = 0.0;
    double safety = 0.9;
};

Calibration calibrate_cstar(const Grid3& grid, double eta, double eps, int trials,
                            std::uint64_t seed = 20240901);

void save_calibration(const Calibration& c, const std::string& path);
Calibration load_calibration(const std::string& path);

struct LemmaSetReport {
    int component = 1;  // 1..3
    Sign sign = Sign::Plus;
    SparsenessReport semi;
};

struct LemmaVerdict {
    bool vacuous = false;  // zero field
    double lhs = 0.0;      // ||u||_{B^-eps_{inf,inf}}
    double rhs = 0.0;      // c(lambda,delta) r^eps ||u||_inf
    double linf = 0.0;
    double scale = 0.0;
    MixingParams params;
    bool hypothesis_met = false;
    std::array<LemmaSetReport, 6> sets{};
    bool all_semi_mixed = false;
    bool some_set_fails = false;
    /// When a set fails delta-semi-mixedness, the lemma forces lhs > rhs.
    bool contrapositive_holds = true;
};

LemmaVerdict verify_mixing_lemma(const VectorField& u, const MixingParams& params, double r);

/// Radial profile of the dome-with-a-lightning-rod: the polygon through
/// (0,2), (1/n,1), (1,1), (2,0), (inf,0) with monotone corner rounding.
double dome_profile(double rho, int n_rod);

ScalarField build_dome_lightning_rod(int n_rod, const Grid3& grid,
                                     bool allow_unresolved = false);

struct CounterexampleRow {
    int n = 0;
    double r_linf = 0.0;       // r ||f||_inf = 4/n (analytic)
    double besov_lower = 0.0;  // dual lower bound on ||f||_{B^-1}, f against itself
    double ratio = 0.0;        // besov_lower / r_linf
    bool rod_resolved = false;
};

struct CounterexampleTable {
    std::vector<CounterexampleRow> rows;
};

CounterexampleTable counterexample_report(const std::vector<int>& n_list, const Grid3& grid);

/// Semi-mixedness of the 3/4-level set of the dome and of its complement at
/// scale 2/n_rod. Requires a grid fine enough to resolve the rod.
MixedReport dome_mixed_check(int n_rod, const Grid3& grid, double delta_target = 0.2);

/// f_eps = (standard mollifier at scale eps_m) * log+(1/|x|), evaluated by
/// exact radial quadrature and sampled at cell centers; the singular center
/// is placed on a cell center.
ScalarField build_mollified_log(double eps_m, const Grid3& grid);

struct MollifiedLogRow {
    double eps_m = 0.0;
    double linf = 0.0;
    double besov0 = 0.0;
    double ratio = 0.0;
};

struct MollifiedLogTable {
    std::vector<MollifiedLogRow> rows;  // sorted by eps_m descending
    double fit_slope = 0.0;             // linf vs log(1/eps_m)
    double fit_r2 = 0.0;
    double besov0_maxmin = 0.0;
    bool ratio_increasing = false;
};

MollifiedLogTable mollified_log_report(const std::vector<double>& eps_list, const Grid3& grid);

}  // namespace mixnorm
