#include "mixnorm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <random>

#include <json.hpp>

namespace mixnorm {

namespace {

double smooth01(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double simpson(double a, double b, int n, const std::function<double(double)>& f) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

struct LinFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    LinFit fit;
    const double vx = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / vx;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double vy = n * syy - sy * sy;
    const double cov = n * sxy - sx * sy;
    fit.r2 = vy > 0 ? (cov * cov) / (vx * vy) : 1.0;
    return fit;
}

}  // namespace

MixingParams mixing_constant(double lambda, double delta, double eps, double c_star) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw InvalidInput("mixing_constant: lambda must be in (0,1)");
    if (!(delta > 1.0 / (1.0 + lambda) && delta < 1.0))
        throw InvalidInput("mixing_constant: delta must be in (1/(1+lambda), 1)");
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidInput("mixing_constant: eps must be in (0,1]");
    if (!(c_star > 0.0)) throw InvalidInput("mixing_constant: c_star must be positive");
    MixingParams p;
    p.lambda = lambda;
    p.delta = delta;
    p.eps = eps;
    p.c_star = c_star;
    p.eta = std::cbrt((delta * (1.0 + lambda) + 1.0) / 2.0) - 1.0;
    p.c_lambda_delta = c_star * (delta * (1.0 + lambda) - 1.0) / 2.0;
    return p;
}

ScalarField build_cutoff(const std::array<double, 3>& x0, double r, double eta,
                         const Grid3& grid) {
    if (!(r > 0.0 && eta > 0.0)) throw InvalidInput("build_cutoff: r and eta must be positive");
    if ((1.0 + eta) * r > grid.L() / 4.0)
        throw InvalidInput("build_cutoff: support (1+eta)r exceeds L/4");
    ScalarField f(grid);
    const int n = grid.n();
    const double outer = (1.0 + eta) * r;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double a = grid.min_image(grid.coord(i) - x0[0]);
                const double b = grid.min_image(grid.coord(j) - x0[1]);
                const double c = grid.min_image(grid.coord(k) - x0[2]);
                const double d = std::sqrt(a * a + b * b + c * c);
                double v;
                if (d <= r)
                    v = 1.0;
                else if (d >= outer)
                    v = 0.0;
                else
                    v = 1.0 - smooth01((d - r) / (eta * r));
                f(i, j, k) = v;
            }
    return f;
}

Calibration calibrate_cstar(const Grid3& grid, double eta, double eps, int trials,
                            std::uint64_t seed) {
    if (trials < 20) throw InvalidInput("calibrate_cstar: trials must be >= 20");
    if (!(eps > 0.0 && eps <= 1.0)) throw InvalidInput("calibrate_cstar: eps must be in (0,1]");

    Calibration cal;
    cal.eta = eta;
    cal.eps = eps;
    cal.seed = seed;
    cal.trials = trials;
    cal.grid_n = grid.n();
    cal.grid_L = grid.L();

    const double dx = grid.dx(), L = grid.L();
    const double rmin = std::max(4.0 * dx, L / 32.0), rmax = L / 8.0;
    const std::array<double, 3> origin = {0.0, 0.0, 0.0};

    // Cutoff-norm constant: c_eta = max_r ||f_r||_B / r^(3-eps).
    cal.c_eta = 0.0;
    for (int k = 0; k < 6; ++k) {
        const double r = rmin * std::pow(rmax / rmin, k / 5.0);
        ScalarField f = build_cutoff(origin, r, eta, grid);
        cal.c_eta = std::max(cal.c_eta,
                             besov_11_fd(f, eps, L / 4.0) / std::pow(r, 3.0 - eps));
    }

    // Duality constant over a synthetic (u, f) family.
    LPBank bank = build_lp_bank(grid);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = grid.n();
    int usable = 0;
    cal.c_duality = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        const double rf = rmin * std::pow(rmax / rmin, unit(rng));
        std::array<double, 3> cf;
        for (auto& c : cf) c = grid.coord(int(unit(rng) * n) % n);
        ScalarField f = build_cutoff(cf, rf, eta, grid);

        ScalarField u(grid);
        const double amp = 0.5 + unit(rng);
        const int kind = t % 4;
        if (kind == 0) {
            // band-limited single mode
            const int kmaxi = std::max(1, n / 3 - 1);
            int m1 = 1 + int(unit(rng) * kmaxi), m2 = int(unit(rng) * kmaxi),
                m3 = int(unit(rng) * kmaxi);
            const double phase = 2.0 * M_PI * unit(rng);
            const double kf = 2.0 * M_PI / L;
            for (int kz = 0; kz < n; ++kz)
                for (int ky = 0; ky < n; ++ky)
                    for (int kx = 0; kx < n; ++kx)
                        u(kx, ky, kz) = amp * std::cos(kf * (m1 * grid.coord(kx) +
                                                             m2 * grid.coord(ky) +
                                                             m3 * grid.coord(kz)) +
                                                       phase);
        } else if (kind == 1) {
            // bump at a random center
            std::array<double, 3> cu;
            for (auto& c : cu) c = grid.coord(int(unit(rng) * n) % n);
            const double ru = rmin * std::pow(rmax / rmin, unit(rng));
            u = build_cutoff(cu, ru, 0.5, grid);
            u.data *= amp;
        } else if (kind == 2) {
            // plateau bump sharing the cutoff's center (violation-style)
            u = build_cutoff(cf, rf, 0.5, grid);
            u.data *= amp;
        } else {
            // the test function itself
            u = f;
            u.data *= amp;
        }

        const double pairing =
            std::abs((u.data * f.data).sum()) * grid.voxel_measure();
        if (pairing < 1e-12 * linf_norm(u) * l1_norm(f)) continue;  // vacuous trial
        const double besov = besov_inf_inf(u, -eps, bank).value;
        const double fb = besov_11_fd(f, eps, L / 4.0);
        cal.c_duality = std::min(cal.c_duality, besov * fb / pairing);
        ++usable;
    }
    if (usable < 5) throw CalibrationError("calibrate_cstar: degenerate trial family");
    cal.c_star = cal.safety * cal.c_duality * kUnitBallVolume / cal.c_eta;
    return cal;
}

void save_calibration(const Calibration& c, const std::string& path) {
    nlohmann::json j;
    j["c_star"] = c.c_star;
    j["c_duality"] = c.c_duality;
    j["c_eta"] = c.c_eta;
    j["eta"] = c.eta;
    j["eps"] = c.eps;
    j["seed"] = c.seed;
    j["trials"] = c.trials;
    j["grid"] = {{"n", c.grid_n}, {"L", c.grid_L}};
    j["safety"] = c.safety;
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write calibration file " + path);
    out << j.dump(2) << "\n";
}

Calibration load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read calibration file " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    Calibration c;
    c.c_star = j.at("c_star");
    c.c_duality = j.at("c_duality");
    c.c_eta = j.at("c_eta");
    c.eta = j.at("eta");
    c.eps = j.at("eps");
    c.seed = j.at("seed");
    c.trials = j.at("trials");
    c.grid_n = j.at("grid").at("n");
    c.grid_L = j.at("grid").at("L");
    c.safety = j.at("safety");
    return c;
}

LemmaVerdict verify_mixing_lemma(const VectorField& u, const MixingParams& params, double r) {
    if (!(r > 0.0 && r <= u.grid.L() / 4.0))
        throw InvalidInput("verify_mixing_lemma: r must be in (0, L/4]");
    LemmaVerdict v;
    v.params = params;
    v.scale = r;
    v.linf = linf_norm(u);
    if (v.linf == 0.0) {
        v.vacuous = true;
        return v;
    }
    LPBank bank = build_lp_bank(u.grid);
    v.lhs = besov_inf_inf(u, -params.eps, bank).value;
    v.rhs = params.c_lambda_delta * std::pow(r, params.eps) * v.linf;
    v.hypothesis_met = v.lhs <= v.rhs;

    int idx = 0;
    v.all_semi_mixed = true;
    for (int i = 1; i <= 3; ++i)
        for (Sign s : {Sign::Plus, Sign::Minus}) {
            LevelSet A = component_superlevel(u, i, s, params.lambda);
            LemmaSetReport& rep = v.sets[std::size_t(idx++)];
            rep.component = i;
            rep.sign = s;
            rep.semi = semi_mixed(A, r, params.delta);
            v.all_semi_mixed = v.all_semi_mixed && rep.semi.pass;
            v.some_set_fails = v.some_set_fails || !rep.semi.pass;
        }
    v.contrapositive_holds = !v.some_set_fails || v.lhs > v.rhs;
    return v;
}

double dome_profile(double rho, int n_rod) {
    // knots of the polygonal profile and the segment slopes
    const double x1 = 1.0 / n_rod;
    const double xs[4] = {0.0, x1, 1.0, 2.0};
    const double ys[4] = {2.0, 1.0, 1.0, 0.0};
    const double slope[4] = {-double(n_rod), 0.0, -1.0, 0.0};  // slope[i] on [xs[i], xs[i+1])

    auto linear = [&](double x) {
        if (x >= 2.0) return 0.0;
        int s = x < x1 ? 0 : (x < 1.0 ? 1 : 2);
        return ys[s] + slope[s] * (x - xs[s]);
    };

    // monotone cubic Hermite rounding at the three interior corners
    for (int c = 1; c <= 3; ++c) {
        const double left = xs[c] - xs[c - 1];
        const double right = (c == 3) ? left : xs[c + 1] - xs[c];
        const double w = 0.1 * std::min(left, right);
        if (rho > xs[c] - w && rho < xs[c] + w) {
            const double x0 = xs[c] - w, xx1 = xs[c] + w;
            const double p0 = linear(x0), p1 = linear(xx1);
            const double m0 = slope[c - 1], m1 = (c == 3) ? 0.0 : slope[c];
            const double h = xx1 - x0;
            const double t = (rho - x0) / h;
            const double t2 = t * t, t3 = t2 * t;
            return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * h * m0 +
                   (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * h * m1;
        }
    }
    return linear(rho);
}

ScalarField build_dome_lightning_rod(int n_rod, const Grid3& grid, bool allow_unresolved) {
    if (n_rod < 4) throw InvalidInput("build_dome_lightning_rod: n_rod must be >= 4");
    if (grid.L() < 8.0)
        throw InvalidInput("build_dome_lightning_rod: support radius 2 needs L >= 8");
    if (!allow_unresolved && grid.dx() > 1.0 / (4.0 * n_rod)) {
        int req = 8;
        while (req * 1.0 / (4.0 * n_rod) < grid.L()) req *= 2;
        throw InvalidInput("build_dome_lightning_rod: rod width 1/" + std::to_string(n_rod) +
                           " needs >= 4 voxels; use n >= " + std::to_string(req));
    }
    ScalarField f(grid);
    const int n = grid.n();
    // center the profile on a cell center so the peak value 2 is sampled
    const std::array<double, 3> x0 = grid.center(n / 2, n / 2, n / 2);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double a = grid.min_image(grid.coord(i) - x0[0]);
                const double b = grid.min_image(grid.coord(j) - x0[1]);
                const double c = grid.min_image(grid.coord(k) - x0[2]);
                f(i, j, k) = dome_profile(std::sqrt(a * a + b * b + c * c), n_rod);
            }
    return f;
}

CounterexampleTable counterexample_report(const std::vector<int>& n_list, const Grid3& grid) {
    CounterexampleTable table;
    for (int n : n_list) {
        ScalarField f = build_dome_lightning_rod(n, grid, /*allow_unresolved=*/true);
        CounterexampleRow row;
        row.n = n;
        row.r_linf = 4.0 / n;  // r = 2/n, ||f||_inf = 2 by construction
        row.besov_lower = dual_lower_bound(f, f, 1.0);
        row.ratio = row.besov_lower / row.r_linf;
        row.rod_resolved = grid.dx() <= 1.0 / (4.0 * n);
        table.rows.push_back(row);
    }
    return table;
}

MixedReport dome_mixed_check(int n_rod, const Grid3& grid, double delta_target) {
    ScalarField f = build_dome_lightning_rod(n_rod, grid);
    LevelSet S = superlevel_abs(f, 0.75 * linf_norm(f));
    return mixed(S, 2.0 / n_rod, delta_target);
}

namespace {

// Mollifier shape integral and normalization for rho(z) = C exp(-1/(1-|z|^2)).
double mollifier_shape(double t) {
    if (t >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

// Antiderivative of u*log+(1/u): A'(u) = -u log u for u <= 1, 0 beyond.
double log_antideriv(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 0.25;
    return u * u * (0.25 - 0.5 * std::log(u));
}

}  // namespace

ScalarField build_mollified_log(double eps_m, const Grid3& grid) {
    if (!(eps_m > 0.0)) throw InvalidInput("build_mollified_log: eps_m must be positive");
    if (1.0 + eps_m > grid.L() / 4.0)
        throw InvalidInput("build_mollified_log: support 1+eps_m exceeds L/4");

    const double shape_norm =
        4.0 * M_PI * simpson(0.0, 1.0, 512, [](double t) { return t * t * mollifier_shape(t); });

    // Exact radial convolution: reduce the 3D integral to 1D via the
    // antiderivative of u log+(1/u), then tabulate and interpolate.
    auto center_value = [&](double e) {
        return 4.0 * M_PI / shape_norm *
               simpson(0.0, 1.0, 512, [&](double t) {
                   if (t <= 0.0 || t * e >= 1.0) return 0.0;  // t^2 log(1/t) -> 0
                   return t * t * mollifier_shape(t) * std::log(1.0 / (t * e));
               });
    };
    auto radial_value = [&](double rho0, double e) {
        if (rho0 < 1e-12) return center_value(e);
        return 2.0 * M_PI / shape_norm / (rho0 * e) *
               simpson(0.0, 1.0, 512, [&](double t) {
                   return t * mollifier_shape(t) *
                          (log_antideriv(rho0 + e * t) - log_antideriv(std::abs(rho0 - e * t)));
               });
    };

    const double rho_max = 1.0 + eps_m;
    const int ntab = 4096;
    std::vector<double> table(std::size_t(ntab + 1));
    for (int i = 0; i <= ntab; ++i)
        table[std::size_t(i)] = radial_value(rho_max * i / ntab, eps_m);

    ScalarField f(grid);
    const int n = grid.n();
    const std::array<double, 3> x0 = grid.center(n / 2, n / 2, n / 2);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double a = grid.min_image(grid.coord(i) - x0[0]);
                const double b = grid.min_image(grid.coord(j) - x0[1]);
                const double c = grid.min_image(grid.coord(k) - x0[2]);
                const double rho = std::sqrt(a * a + b * b + c * c);
                if (rho >= rho_max) continue;
                const double s = rho / rho_max * ntab;
                const int lo = std::min(int(s), ntab - 1);
                const double w = s - lo;
                f(i, j, k) = (1.0 - w) * table[std::size_t(lo)] + w * table[std::size_t(lo + 1)];
            }
    return f;
}

MollifiedLogTable mollified_log_report(const std::vector<double>& eps_list, const Grid3& grid) {
    std::vector<double> eps_sorted(eps_list);
    std::sort(eps_sorted.rbegin(), eps_sorted.rend());
    LPBank bank = build_lp_bank(grid);

    MollifiedLogTable table;
    std::vector<double> xs, ys;
    double bmin = std::numeric_limits<double>::infinity(), bmax = 0.0;
    for (double e : eps_sorted) {
        ScalarField f = build_mollified_log(e, grid);
        MollifiedLogRow row;
        row.eps_m = e;
        row.linf = linf_norm(f);
        row.besov0 = besov_inf_inf(f, 0.0, bank).value;
        row.ratio = row.linf / row.besov0;
        table.rows.push_back(row);
        xs.push_back(std::log(1.0 / e));
        ys.push_back(row.linf);
        bmin = std::min(bmin, row.besov0);
        bmax = std::max(bmax, row.besov0);
    }
    LinFit fit = linear_fit(xs, ys);
    table.fit_slope = fit.slope;
    table.fit_r2 = fit.r2;
    table.besov0_maxmin = bmax / bmin;
    table.ratio_increasing = true;
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (!(table.rows[i].ratio > table.rows[i - 1].ratio)) table.ratio_increasing = false;
    return table;
}

}  // namespace mixnorm
