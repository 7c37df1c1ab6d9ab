#pragma once

#include <vector>

#include "mixnorm/fft.hpp"
#include "mixnorm/field.hpp"

namespace mixnorm {

/// Dyadic Fourier multipliers phi_j for the Littlewood-Paley blocks.
/// j = -1 is the low block (owns the mean); j = 0..jmax are annuli with
/// supp phi_j in {3/4 * 2^j <= |xi| <= 8/3 * 2^j}. The multipliers telescope
/// a smooth radial low-pass, so they sum to 1 at every retained mode.
struct LPBank {
    Grid3 grid;
    int jmin = -1;
    int jmax = 0;
    std::vector<Eigen::ArrayXd> multipliers;  // index j - jmin

    const Eigen::ArrayXd& phi(int j) const {
        if (j < jmin || j > jmax) throw InvalidInput("LPBank: block index out of range");
        return multipliers[std::size_t(j - jmin)];
    }
};

/// Smoothness/integrability parameters for the Besov norms in use.
struct BesovParams {
    double s = 0.0;           // B^s_{inf,inf} exponent
    double eps = 1.0;         // B^eps_{1,1} exponent, in (0,1]
};

LPBank build_lp_bank(const Grid3& grid);

/// Delta_j f (input is dealiased before analysis).
ScalarField lp_block(const ScalarField& f, const LPBank& bank, int j);

struct BesovResult {
    double value = 0.0;
    int attaining_j = -1;
    int attaining_component = 0;
};

/// ||f||_{B^s_{inf,inf}} = sup_j 2^{js} ||Delta_j f||_inf (components maxed).
BesovResult besov_inf_inf(const ScalarField& f, double s, const LPBank& bank,
                          bool subtract_mean = false);
BesovResult besov_inf_inf(const VectorField& u, double s, const LPBank& bank,
                          bool subtract_mean = false);

/// Finite-difference B^eps_{1,1} norm: ||f||_L1 plus a dyadic sum over shift
/// scales t = hmax * 2^-m of t^-eps * omega(t) * ln 2, where omega is the
/// L1 modulus of continuity of order one (eps < 1) or two (eps = 1),
/// sampled over 26 lattice directions with integer-voxel shifts.
double besov_11_fd(const ScalarField& f, double eps, double hmax);

/// |integral of u*f| / ||f||_{B^eps_{1,1}}; combine with the calibrated
/// duality constant to lower-bound ||u||_{B^-eps_{inf,inf}}.
double dual_lower_bound(const ScalarField& u, const ScalarField& f, double eps);

}  // namespace mixnorm
