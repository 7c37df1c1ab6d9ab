#include "mixnorm/sparse.hpp"

#include <cmath>

#include "mixnorm/fft.hpp"

namespace mixnorm {

namespace {

void check_scale(const Grid3& g, double r) {
    if (!(r > 0.0 && r <= g.L() / 4.0))
        throw InvalidInput("sparseness scale r must satisfy 0 < r <= L/4");
}

int signed_offset(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace

std::vector<std::array<double, 3>> fibonacci_sphere(int ndir) {
    if (ndir < 1) throw InvalidInput("fibonacci_sphere: ndir must be positive");
    std::vector<std::array<double, 3>> dirs{std::size_t(ndir)};
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < ndir; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / ndir;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        dirs[std::size_t(i)] = {rho * std::cos(phi), rho * std::sin(phi), z};
    }
    return dirs;
}

SparsenessReport sparseness_1d(const LevelSet& S, const std::array<double, 3>& x0, double r,
                               double delta, int ndir) {
    check_scale(S.grid, r);
    if (ndir < 26) throw InvalidInput("sparseness_1d: ndir must be >= 26");
    const Grid3& g = S.grid;
    const int nsamp = int(std::ceil(4.0 * r / g.dx()));
    const auto dirs = fibonacci_sphere(ndir);

    SparsenessReport rep;
    rep.kind = SparseKind::OneD;
    rep.scale = r;
    rep.point = x0;
    rep.delta_target = delta;
    rep.ndir = ndir;
    rep.ratio = 2.0;  // above any attainable fraction
    for (const auto& d : dirs) {
        int inside = 0;
        for (int m = 0; m < nsamp; ++m) {
            const double s = -1.0 + (2.0 * m + 1.0) / nsamp;  // midpoints of (-1,1)
            const int i = g.nearest(x0[0] + s * r * d[0]);
            const int j = g.nearest(x0[1] + s * r * d[1]);
            const int k = g.nearest(x0[2] + s * r * d[2]);
            inside += S.mask[std::size_t(g.index(i, j, k))] != 0;
        }
        const double frac = double(inside) / nsamp;
        if (frac < rep.ratio) {
            rep.ratio = frac;
            rep.direction = d;
        }
    }
    rep.pass = rep.ratio <= delta;
    return rep;
}

SparsenessReport sparseness_3d(const LevelSet& S, const std::array<double, 3>& x0, double r,
                               double delta) {
    check_scale(S.grid, r);
    const Grid3& g = S.grid;
    const double r2 = r * r;
    std::int64_t in_ball = 0, in_set = 0;
    // Scan only the bounding sub-box of the ball.
    const int i0 = g.nearest(x0[0]), j0 = g.nearest(x0[1]), k0 = g.nearest(x0[2]);
    const int halo = int(std::ceil(r / g.dx())) + 1;
    for (int dk = -halo; dk <= halo; ++dk)
        for (int dj = -halo; dj <= halo; ++dj)
            for (int di = -halo; di <= halo; ++di) {
                const int i = g.wrap(i0 + di), j = g.wrap(j0 + dj), k = g.wrap(k0 + dk);
                const double ddx = g.min_image(g.coord(i) - x0[0]);
                const double ddy = g.min_image(g.coord(j) - x0[1]);
                const double ddz = g.min_image(g.coord(k) - x0[2]);
                if (ddx * ddx + ddy * ddy + ddz * ddz < r2) {
                    ++in_ball;
                    in_set += S.mask[std::size_t(g.index(i, j, k))] != 0;
                }
            }
    if (in_ball == 0)
        throw DegenerateScale("sparseness_3d: ball contains no voxel centers");
    SparsenessReport rep;
    rep.kind = SparseKind::ThreeD;
    rep.scale = r;
    rep.point = x0;
    rep.delta_target = delta;
    rep.ratio = double(in_set) / double(in_ball);
    rep.pass = rep.ratio <= delta;
    return rep;
}

Eigen::ArrayXd ball_fraction_field(const LevelSet& S, double r) {
    check_scale(S.grid, r);
    const Grid3& g = S.grid;
    const int n = g.n();
    Fft3& fft = fft_for(g);

    Eigen::ArrayXd kernel = Eigen::ArrayXd::Zero(g.size());
    const double r2 = r * r, dx = g.dx();
    std::int64_t count = 0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double a = signed_offset(i, n) * dx;
                const double b = signed_offset(j, n) * dx;
                const double c = signed_offset(k, n) * dx;
                if (a * a + b * b + c * c < r2) {
                    kernel[g.index(i, j, k)] = 1.0;
                    ++count;
                }
            }
    if (count == 0) throw DegenerateScale("ball kernel contains no voxel centers");

    Eigen::ArrayXd maskd(g.size());
    for (std::int64_t v = 0; v < g.size(); ++v) maskd[v] = S.mask[std::size_t(v)] ? 1.0 : 0.0;

    SpectralField prod = fft.forward(maskd) * fft.forward(kernel);
    Eigen::ArrayXd frac = fft.inverse(prod) / double(count);
    // floating dust removal
    frac = frac.max(0.0).min(1.0);
    for (std::int64_t v = 0; v < frac.size(); ++v) {
        if (frac[v] < 1e-12) frac[v] = 0.0;
        if (frac[v] > 1.0 - 1e-12) frac[v] = 1.0;
    }
    return frac;
}

double ball_fraction_direct(const LevelSet& S, int i, int j, int k, double r) {
    const Grid3& g = S.grid;
    const int n = g.n();
    const double r2 = r * r, dx = g.dx();
    std::int64_t in_ball = 0, in_set = 0;
    const int halo = std::min(int(std::ceil(r / dx)) + 1, n / 2);
    for (int dk = -halo; dk <= halo; ++dk)
        for (int dj = -halo; dj <= halo; ++dj)
            for (int di = -halo; di <= halo; ++di) {
                const double a = di * dx, b = dj * dx, c = dk * dx;
                if (a * a + b * b + c * c < r2) {
                    ++in_ball;
                    in_set += S.mask[std::size_t(
                                  g.index(g.wrap(i + di), g.wrap(j + dj), g.wrap(k + dk)))] != 0;
                }
            }
    return double(in_set) / double(in_ball);
}

SparsenessReport semi_mixed(const LevelSet& S, double r, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("semi_mixed: delta must be in (0,1)");
    Eigen::ArrayXd frac = ball_fraction_field(S, r);
    SparsenessReport rep;
    rep.kind = SparseKind::SemiMixed;
    rep.scale = r;
    rep.delta_target = delta;
    Eigen::Index argmax = 0;
    rep.ratio = frac.maxCoeff(&argmax);
    const Grid3& g = S.grid;
    const int n = g.n();
    const int i = int(argmax % n), j = int((argmax / n) % n), k = int(argmax / (std::int64_t(n) * n));
    rep.point = g.center(i, j, k);
    rep.pass = rep.ratio <= delta;
    return rep;
}

MixedReport mixed(const LevelSet& S, double r, double delta) {
    MixedReport rep;
    rep.set = semi_mixed(S, r, delta);
    rep.complement = semi_mixed(S.complement(), r, delta);
    rep.pass = rep.set.pass && rep.complement.pass;
    return rep;
}

RemarkReport remark_3d_implies_1d(const LevelSet& S, const std::array<double, 3>& x0, double r,
                                  double delta, int ndir, double tol) {
    RemarkReport rep;
    rep.three_d = sparseness_3d(S, x0, r, delta);
    rep.target = std::cbrt(delta) + tol;
    if (!rep.three_d.pass) {
        rep.vacuous = true;
        return rep;
    }
    for (double rho : {r, r / 2.0, r / 4.0, r / 8.0}) {
        SparsenessReport one = sparseness_1d(S, x0, rho, rep.target, ndir);
        if (one.ratio < rep.ratio) {
            rep.ratio = one.ratio;
            rep.rho = rho;
            rep.direction = one.direction;
        }
        if (one.ratio <= rep.target) {
            rep.witness_found = true;
            rep.rho = rho;
            rep.direction = one.direction;
            rep.ratio = one.ratio;
            break;
        }
    }
    return rep;
}

}  // namespace mixnorm
