// Acceptance suite: one pass/fail line per criterion; exit status is the
// number of failures. argv[1] is the path to the mixnorm CLI (criterion 12).

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mixnorm/experiments.hpp"
#include "mixnorm/field_io.hpp"
#include "mixnorm/manifest.hpp"
#include "mixnorm/nse.hpp"
#include "mixnorm/sparse.hpp"

using namespace mixnorm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

ScalarField random_dealiased(const Grid3& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    ScalarField f(g);
    for (auto& v : f.data) v = dist(rng);
    Fft3& fft = fft_for(g);
    SpectralField s = fft.forward(f.data);
    fft.dealias(s);
    f.data = fft.inverse(s);
    return f;
}

ScalarField cosine_mode(const Grid3& g, int kx, int ky, int kz, double amp) {
    ScalarField f(g);
    const double w = 2.0 * M_PI / g.L();
    for (int k = 0; k < g.n(); ++k)
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i)
                f(i, j, k) = amp * std::cos(w * (kx * g.coord(i) + ky * g.coord(j) +
                                                 kz * g.coord(k)));
    return f;
}

// 1. LP partition of unity on random dealiased fields.
Outcome crit_partition() {
    Grid3 g(32, 2.0 * M_PI);
    LPBank bank = build_lp_bank(g);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        ScalarField f = random_dealiased(g, seed);
        Eigen::ArrayXd recon = Eigen::ArrayXd::Zero(g.size());
        for (int j = bank.jmin; j <= bank.jmax; ++j) recon += lp_block(f, bank, j).data;
        worst = std::max(worst, (recon - f.data).abs().maxCoeff() / linf_norm(f));
    }
    return {worst <= 1e-10, "max relative reconstruction error " + fmt_g17(worst)};
}

// 2. Single-mode Besov oracle.
Outcome crit_single_mode() {
    Grid3 g(32, 2.0 * M_PI);
    LPBank bank = build_lp_bank(g);
    struct Mode { int kx, ky, kz, j; };
    double worst = 0.0;
    for (Mode m : {Mode{3, 0, 0, 1}, Mode{2, 2, 1, 1}, Mode{6, 0, 0, 2}, Mode{4, 4, 2, 2}}) {
        ScalarField f = cosine_mode(g, m.kx, m.ky, m.kz, 1.3);
        const double sup = linf_norm(f);
        for (double s : {-1.0, -0.5, 0.0}) {
            BesovResult r = besov_inf_inf(f, s, bank);
            double expect = std::pow(2.0, m.j * s) * sup;
            worst = std::max(worst, std::abs(r.value - expect) / expect);
            if (r.attaining_j != m.j)
                return {false, "mode attained at wrong block j=" + std::to_string(r.attaining_j)};
        }
    }
    return {worst <= 1e-10, "max relative error " + fmt_g17(worst)};
}

// 3. Mixing-constant arithmetic at (1/2, 3/4).
Outcome crit_mixing_arith() {
    MixingParams p = mixing_constant(0.5, 0.75, 1.0, 1.0);
    double cube = std::pow(1.0 + p.eta, 3);
    double margin = (p.delta * (1.0 + p.lambda) - 1.0) / 2.0;
    bool ok = std::abs(cube - 1.0625) <= 1e-12 && margin == 0.0625;
    return {ok, "(1+eta)^3 = " + fmt_g17(cube) + ", margin = " + fmt_g17(margin)};
}

// 4. Cutoff norm law: log-log slope of ||f||_B vs r equals 3 - eps within 10%.
Outcome crit_cutoff_law() {
    Grid3 g(128, 8.0);
    const double eta = 0.5;
    std::string detail;
    for (double eps : {0.5, 1.0}) {
        std::vector<double> lr, ln;
        for (double r : {g.L() / 8.0, g.L() / 16.0, g.L() / 32.0}) {
            ScalarField f = build_cutoff({0.0, 0.0, 0.0}, r, eta, g);
            lr.push_back(std::log(r));
            ln.push_back(std::log(besov_11_fd(f, eps, g.L() / 4.0)));
        }
        // least-squares slope through three points
        double mx = (lr[0] + lr[1] + lr[2]) / 3.0, my = (ln[0] + ln[1] + ln[2]) / 3.0;
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 3; ++i) {
            num += (lr[std::size_t(i)] - mx) * (ln[std::size_t(i)] - my);
            den += (lr[std::size_t(i)] - mx) * (lr[std::size_t(i)] - mx);
        }
        double slope = num / den, target = 3.0 - eps;
        detail += "eps=" + fmt_g17(eps) + " slope=" + fmt_g17(slope) + " ";
        if (std::abs(slope - target) > 0.1 * target) return {false, detail};
    }
    return {true, detail};
}

// 5. Contrapositive suite: engineered semi-mixedness violations.
Outcome crit_contrapositive() {
    Grid3 g(32, 2.0 * M_PI);
    Calibration cal = calibrate_cstar(g, mixing_constant(0.5, 0.75, 1.0, 1.0).eta, 1.0, 30,
                                      20240901);
    MixingParams params = mixing_constant(0.5, 0.75, 1.0, cal.c_star);

    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> voxel(0, g.n() - 1);
    std::uniform_real_distribution<double> rdist(4.0 * g.dx(), g.L() / 8.0);
    std::uniform_real_distribution<double> adist(0.25, 4.0);
    std::uniform_int_distribution<int> cdist(0, 2);
    std::uniform_int_distribution<int> sdist(0, 1);

    int ok = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const double r = rdist(rng);
        const double amp = adist(rng) * (sdist(rng) ? 1.0 : -1.0);
        std::array<double, 3> c{g.coord(voxel(rng)), g.coord(voxel(rng)), g.coord(voxel(rng))};
        VectorField u(g);
        // a plateau bump fills the ball B(c, r) of its own component's
        // super-level set: fraction one there, a certain violation of
        // delta-semi-mixedness
        u.comp[std::size_t(cdist(rng))] = amp * build_cutoff(c, r, params.eta, g).data;
        LemmaVerdict v = verify_mixing_lemma(u, params, r);
        if (v.some_set_fails && v.lhs > v.rhs) ++ok;
    }
    return {ok == trials, std::to_string(ok) + "/" + std::to_string(trials) + " trials satisfied the bound"};
}

// 6. Counterexample scaling plus the mixedness of the 3/4 level set.
Outcome crit_counterexample() {
    Grid3 g(64, 8.0);
    CounterexampleTable t = counterexample_report({8, 16, 32, 64}, g);
    double lo = t.rows[0].besov_lower, hi = lo;
    for (const auto& row : t.rows) {
        lo = std::min(lo, row.besov_lower);
        hi = std::max(hi, row.besov_lower);
    }
    const double growth = t.rows.back().ratio / t.rows.front().ratio;
    std::string detail = "besov_lower spread " + fmt_g17(hi / lo) + ", ratio growth " +
                         fmt_g17(growth);
    if (hi / lo >= 2.0 || growth < 4.0) return {false, detail};

    Grid3 fine(256, 8.0);
    MixedReport mr = dome_mixed_check(8, fine, 0.2);
    detail += ", level-set ball fraction " + fmt_g17(mr.set.ratio) + " (complement " +
              fmt_g17(mr.complement.ratio) + ")";
    return {mr.set.ratio <= 0.2, detail};
}

// 7. Mollified-log table.
Outcome crit_mollified_log() {
    Grid3 g(128, 4.5);
    MollifiedLogTable t =
        mollified_log_report({1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}, g);
    std::string detail = "R2 " + fmt_g17(t.fit_r2) + ", besov0 max/min " +
                         fmt_g17(t.besov0_maxmin) + ", ratio increasing " +
                         std::to_string(t.ratio_increasing);
    return {t.fit_r2 >= 0.98 && t.besov0_maxmin <= 2.0 && t.ratio_increasing, detail};
}

// 8. compute_M.
Outcome crit_compute_m() {
    const double M = compute_M();
    const double h = (2.0 / M_PI) * std::asin((1.0 - std::pow(0.75, 2.0 / 3.0)) /
                                              (1.0 + std::pow(0.75, 2.0 / 3.0)));
    const double resid = std::abs(0.5 * h + (1.0 - h) * M - 1.0);
    return {resid <= 1e-14 && M > 1.0, "M = " + fmt_g17(M) + ", residual " + fmt_g17(resid)};
}

// 9. NSE oracles.
Outcome crit_nse() {
    Grid3 g(32, 2.0 * M_PI);
    NseState st = NseState::from_physical(make_preset("shear", g, 0), 1.0);
    double maxdiv = 0.0;
    for (int i = 0; i < 1000; ++i) {
        step(st, 1e-3);
        maxdiv = std::max(maxdiv, st.max_relative_divergence());
    }
    VectorField u = st.to_physical();
    double err = 0.0;
    for (int k = 0; k < g.n(); ++k)
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i)
                err = std::max(err, std::abs(u.comp[0][g.index(i, j, k)] -
                                             std::exp(-st.t) * std::sin(g.coord(j))));
    if (err > 1e-6 || maxdiv > 1e-12)
        return {false, "shear error " + fmt_g17(err) + ", max divergence " + fmt_g17(maxdiv)};

    NseState tg = NseState::from_physical(make_preset("taylor-green", g, 0), 0.1);
    double prev = tg.energy();
    bool monotone = true;
    while (tg.t < 2.0 - 1e-12) {
        step(tg, 2e-3);
        double e = tg.energy();
        monotone = monotone && e <= prev * (1.0 + 1e-13);
        prev = e;
    }
    return {monotone, "shear error " + fmt_g17(err) + ", max divergence " + fmt_g17(maxdiv) +
                          ", taylor-green energy monotone " + std::to_string(monotone)};
}

// 10. Sparseness oracles.
Outcome crit_sparse() {
    Grid3 g(32, 2.0);
    std::mt19937_64 rng(2024);
    std::bernoulli_distribution coin(0.3);
    std::uniform_int_distribution<int> voxel(0, g.n() - 1);

    LevelSet S(g);
    for (auto& m : S.mask) m = coin(rng) ? 1 : 0;
    Eigen::ArrayXd frac = ball_fraction_field(S, 0.35);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        int i = voxel(rng), j = voxel(rng), k = voxel(rng);
        worst = std::max(worst, std::abs(frac[g.index(i, j, k)] -
                                         ball_fraction_direct(S, i, j, k, 0.35)));
    }
    if (worst > 1e-6) return {false, "conv vs direct mismatch " + fmt_g17(worst)};

    std::uniform_real_distribution<double> pdist(0.05, 0.8);
    for (int t = 0; t < 100; ++t) {
        std::bernoulli_distribution c2(pdist(rng));
        LevelSet M(g);
        for (auto& m : M.mask) m = c2(rng) ? 1 : 0;
        if (M.count() == 0) continue;
        SparsenessReport rep = semi_mixed(M, 0.3, 0.5);
        if (rep.ratio + 1e-12 < double(M.count()) / double(g.size()))
            return {false, "mean-value bound violated at trial " + std::to_string(t)};
    }

    int witnesses = 0, instances = 0;
    Grid3 gr(32, 4.0);  // roomier box so the remark scale stays below L/4
    std::uniform_real_distribution<double> dens(0.05, 0.3);
    while (instances < 1000) {
        std::bernoulli_distribution c3(dens(rng));
        LevelSet M(gr);
        for (auto& m : M.mask) m = c3(rng) ? 1 : 0;
        const double r = 0.8;
        std::array<double, 3> x0{gr.coord(voxel(rng)), gr.coord(voxel(rng)),
                                 gr.coord(voxel(rng))};
        double local = ball_fraction_direct(M, gr.nearest(x0[0]), gr.nearest(x0[1]),
                                            gr.nearest(x0[2]), r);
        const double delta = std::min(0.9, 1.5 * local + 0.1);
        RemarkReport rep = remark_3d_implies_1d(M, x0, r, delta, 64);
        if (rep.vacuous) continue;
        ++instances;
        if (rep.witness_found) ++witnesses;
    }
    std::string detail = "conv error " + fmt_g17(worst) + ", witnesses " +
                         std::to_string(witnesses) + "/1000";
    return {witnesses >= 990, detail};
}

// 11. Escape-time scan vs brute force.
Outcome crit_escape() {
    if (escape_time_indices({1.0, 3.0, 2.0, 4.0}) != std::vector<int>{0, 2})
        return {false, "reference series [1,3,2,4] mismatched"};
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::uniform_int_distribution<int> len(2, 60);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> s(std::size_t(len(rng)));
        for (auto& v : s) v = dist(rng);
        std::vector<int> brute;
        for (std::size_t k = 0; k + 1 < s.size(); ++k) {
            bool esc = true;
            for (std::size_t j = k + 1; j < s.size(); ++j)
                if (s[j] <= s[k]) esc = false;
            if (esc) brute.push_back(int(k));
        }
        if (escape_time_indices(s) != brute)
            return {false, "mismatch at random trial " + std::to_string(t)};
    }
    return {true, "100 random trajectories plus the reference series"};
}

// 12. CLI determinism: identical reruns produce byte-identical outputs.
Outcome crit_determinism(const std::string& cli) {
    if (cli.empty()) return {false, "CLI path not supplied"};
    fs::path work = fs::temp_directory_path() / "mixnorm_accept";
    fs::remove_all(work);
    fs::create_directories(work);

    Grid3 g(32, 2.0 * M_PI);
    const std::string input = (work / "u.bsf").string();
    write_field(make_preset("random-band", g, 5), input);
    {
        std::ofstream cfg(work / "sim.json");
        cfg << R"({"grid":{"n":32},"nu":1.0,"dt":1e-3,"t_end":0.02,"cadence":5,)"
            << R"("preset":"shear","constants":{"c_star":0.5}})";
    }

    auto read_bytes = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)), {});
    };

    struct Cmd { std::string args, out; };
    std::vector<Cmd> cmds = {
        {"norms --input " + input + " --s -1,0 --eps 1", "norms.csv"},
        {"sparseness --input " + input + " --mode semi --component 1 --lambda 0.5 "
         "--scale 0.8 --delta 0.75", "sparse.json"},
        {"experiment mollified-log --grid-n 64 --grid-L 4.5 --eps 1/8,1/16",
         "moll.csv"},
        {"experiment calibrate --grid-n 32 --trials 20 --seed 11", "calib.json"},
        {"simulate --config " + (work / "sim.json").string(), "monitor.csv"},
    };

    for (const auto& c : cmds) {
        std::string bytes[2];
        for (int pass = 0; pass < 2; ++pass) {
            fs::path dir = work / ("run" + std::to_string(pass));
            fs::create_directories(dir);
            fs::path out = dir / c.out;
            std::string cmd = cli + " " + c.args + " --out " + out.string() + " >/dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0)
                return {false, "command failed: " + c.args};
            bytes[pass] = read_bytes(out);
        }
        if (bytes[0].empty() || bytes[0] != bytes[1])
            return {false, "outputs differ for: " + c.args};
    }
    fs::remove_all(work);
    return {true, std::to_string(cmds.size()) + " commands rerun byte-identically"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 partition of unity", crit_partition},
        {"2 single-mode besov oracle", crit_single_mode},
        {"3 mixing-constant arithmetic", crit_mixing_arith},
        {"4 cutoff norm law", crit_cutoff_law},
        {"5 contrapositive suite", crit_contrapositive},
        {"6 counterexample scaling", crit_counterexample},
        {"7 mollified-log", crit_mollified_log},
        {"8 compute_M", crit_compute_m},
        {"9 nse oracles", crit_nse},
        {"10 sparseness oracles", crit_sparse},
        {"11 escape-time scan", crit_escape},
        {"12 cli determinism", [&] { return crit_determinism(cli); }},
    };

    int failures = 0;
    for (auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << name << ": " << o.detail
                  << std::endl;
        failures += o.pass ? 0 : 1;
    }
    return failures;
}
