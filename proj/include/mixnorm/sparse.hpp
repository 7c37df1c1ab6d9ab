#pragma once

#include <array>
#include <vector>

#include "mixnorm/field.hpp"

namespace mixnorm {

/// Volume of the unit ball in R^3.
inline constexpr double kUnitBallVolume = 4.0 * M_PI / 3.0;

enum class SparseKind { OneD, ThreeD, SemiMixed };

struct SparsenessReport {
    SparseKind kind = SparseKind::ThreeD;
    double scale = 0.0;                     // r
    double ratio = 0.0;                     // measured fraction in [0,1]
    std::array<double, 3> point{};          // x0 (1D/3D) or argmax center (semi-mixed)
    std::array<double, 3> direction{};      // witness direction (1D only)
    double delta_target = 0.0;
    bool pass = false;
    int ndir = 0;                           // direction sample size (1D only)
};

struct MixedReport {
    SparsenessReport set;
    SparsenessReport complement;
    bool pass = false;
};

struct RemarkReport {
    SparsenessReport three_d;       // the 3D sparseness check that gates the remark
    bool vacuous = false;           // set was not 3D delta-sparse; nothing to verify
    bool witness_found = false;
    double rho = 0.0;
    std::array<double, 3> direction{};
    double ratio = 1.0;
    double target = 0.0;            // delta^(1/3) + tol
};

/// Near-uniform unit direction sample (deterministic).
std::vector<std::array<double, 3>> fibonacci_sphere(int ndir);

/// Definition of 1D sparseness is existential in the direction, so the report
/// carries the minimum segment fraction over the sampled directions.
SparsenessReport sparseness_1d(const LevelSet& S, const std::array<double, 3>& x0, double r,
                               double delta, int ndir = 64);

SparsenessReport sparseness_3d(const LevelSet& S, const std::array<double, 3>& x0, double r,
                               double delta);

/// Max local ball fraction over all voxel centers, via FFT convolution of the
/// mask with the normalized ball indicator.
SparsenessReport semi_mixed(const LevelSet& S, double r, double delta);

MixedReport mixed(const LevelSet& S, double r, double delta);

RemarkReport remark_3d_implies_1d(const LevelSet& S, const std::array<double, 3>& x0, double r,
                                  double delta, int ndir = 64, double tol = 0.05);

/// Direct voxel-count ball fraction at the center of voxel (i,j,k); shares the
/// membership predicate with the semi_mixed convolution kernel.
double ball_fraction_direct(const LevelSet& S, int i, int j, int k, double r);

/// The full local ball-average field (exposed for tests and the NSE monitor).
Eigen::ArrayXd ball_fraction_field(const LevelSet& S, double r);

}  // namespace mixnorm
