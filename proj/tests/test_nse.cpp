#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mixnorm/nse.hpp"

using namespace mixnorm;

TEST_CASE("compute_M solves its defining equation") {
    const double M = compute_M();
    const double h = (2.0 / M_PI) * std::asin((1.0 - std::pow(0.75, 2.0 / 3.0)) /
                                              (1.0 + std::pow(0.75, 2.0 / 3.0)));
    CHECK(std::abs(0.5 * h + (1.0 - h) * M - 1.0) <= 1e-14);
    CHECK(M > 1.0);
    CHECK(M == doctest::Approx(1.0325).epsilon(1e-3));
}

TEST_CASE("leray projection kills gradients and is idempotent") {
    Grid3 g(32, 2.0 * M_PI);
    Fft3& fft = fft_for(g);
    // u = grad(cos(2x) cos(3y) cos(z)) sampled spectrally
    VectorField u(g);
    for (int k = 0; k < g.n(); ++k)
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i) {
                double x = g.coord(i), y = g.coord(j), z = g.coord(k);
                u.comp[0][g.index(i, j, k)] = -2.0 * std::sin(2 * x) * std::cos(3 * y) * std::cos(z);
                u.comp[1][g.index(i, j, k)] = -3.0 * std::cos(2 * x) * std::sin(3 * y) * std::cos(z);
                u.comp[2][g.index(i, j, k)] = -std::cos(2 * x) * std::cos(3 * y) * std::sin(z);
            }
    std::array<SpectralField, 3> u_hat{fft.forward(u.comp[0]), fft.forward(u.comp[1]),
                                       fft.forward(u.comp[2])};
    leray_project(fft, u_hat);
    double resid = 0.0;
    for (int c = 0; c < 3; ++c) resid = std::max(resid, u_hat[c].abs().maxCoeff());
    CHECK(resid < 1e-8 * double(g.size()));

    // idempotence on a random field
    std::mt19937_64 rng(4);
    std::normal_distribution<double> dist;
    VectorField w(g);
    for (int c = 0; c < 3; ++c)
        for (auto& v : w.comp[c]) v = dist(rng);
    std::array<SpectralField, 3> w_hat{fft.forward(w.comp[0]), fft.forward(w.comp[1]),
                                       fft.forward(w.comp[2])};
    leray_project(fft, w_hat);
    auto once = w_hat;
    leray_project(fft, w_hat);
    for (int c = 0; c < 3; ++c)
        CHECK((w_hat[c] - once[c]).abs().maxCoeff() < 1e-10 * double(g.size()));
}

TEST_CASE("state round trip keeps divergence tiny") {
    Grid3 g(32, 2.0 * M_PI);
    VectorField u = make_preset("taylor-green", g, 0);
    NseState st = NseState::from_physical(u, 0.01);
    CHECK(st.max_relative_divergence() < 1e-12);
    VectorField back = st.to_physical();
    CHECK(back.grid == g);
    CHECK(linf_norm(back) > 0.5);
}

TEST_CASE("shear flow decays exactly and cfl rejection reports a usable dt") {
    Grid3 g(32, 2.0 * M_PI);
    const double nu = 1.0;
    NseState st = NseState::from_physical(make_preset("shear", g, 0), nu);
    for (int i = 0; i < 100; ++i) {
        step(st, 1e-3);
        CHECK(st.max_relative_divergence() < 1e-12);
    }
    VectorField u = st.to_physical();
    double err = 0.0;
    for (int k = 0; k < g.n(); ++k)
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i)
                err = std::max(err, std::abs(u.comp[0][g.index(i, j, k)] -
                                             std::exp(-nu * st.t) * std::sin(g.coord(j))));
    CHECK(err < 1e-8);

    try {
        step(st, 10.0);
        CHECK(false);
    } catch (const StepRejected& e) {
        CHECK(e.admissible_dt > 0.0);
        CHECK(e.admissible_dt < 10.0);
        NseState st2 = NseState::from_physical(make_preset("shear", g, 0), nu);
        step(st2, e.admissible_dt);  // the advertised dt is accepted
    }
}

TEST_CASE("taylor-green energy is non-increasing") {
    Grid3 g(32, 2.0 * M_PI);
    NseState st = NseState::from_physical(make_preset("taylor-green", g, 0), 0.05);
    double prev = st.energy();
    for (int i = 0; i < 50; ++i) {
        step(st, 5e-3);
        double e = st.energy();
        CHECK(e <= prev * (1.0 + 1e-13));
        prev = e;
    }
}

TEST_CASE("random-band preset is normalized, divergence-free and seeded") {
    Grid3 g(32, 2.0 * M_PI);
    VectorField a = make_preset("random-band", g, 42);
    VectorField b = make_preset("random-band", g, 42);
    VectorField c = make_preset("random-band", g, 43);
    CHECK(linf_norm(a) == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < 3; ++i) CHECK((a.comp[i] == b.comp[i]).all());
    bool differs = false;
    for (int i = 0; i < 3; ++i) differs = differs || !(a.comp[i] == c.comp[i]).all();
    CHECK(differs);
    CHECK(NseState::from_physical(a, 1.0).max_relative_divergence() < 1e-12);
    CHECK_THROWS_AS(make_preset("nonsense", g, 0), InvalidInput);
}

TEST_CASE("monitor snapshot") {
    Grid3 g(32, 2.0 * M_PI);
    LPBank bank = build_lp_bank(g);
    MonitorConstants consts;
    consts.M = compute_M();
    consts.c_star = 0.5;

    VectorField z(g);
    CHECK(!monitor_snapshot(z, consts, bank).has_value());

    VectorField u = make_preset("shear", g, 0);
    auto rec = monitor_snapshot(u, consts, bank);
    REQUIRE(rec.has_value());
    CHECK(rec->linf == doctest::Approx(linf_norm(u)).epsilon(1e-14));
    const double unclamped = 1.0 / (2.0 * consts.C_M * consts.Ctilde_M * rec->linf);
    CHECK(rec->scale == doctest::Approx(std::min(unclamped, g.L() / 4.0)).epsilon(1e-14));
    CHECK(rec->scale_clamped == (unclamped > g.L() / 4.0));
    for (double f : rec->fractions) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
    CHECK(rec->smallness == (rec->besov_m1 <= consts.m0()));
    const double cc = consts.c_star * consts.c_star / 4.0;
    CHECK(rec->nonsmallness == (rec->besov_m1 <= cc * rec->linf / rec->besov_0));
    bool sparse = true;
    for (double f : rec->fractions) sparse = sparse && f <= 0.75;
    CHECK(rec->sparsity == sparse);

    // homogeneity: doubling u doubles the norms and halves the scale
    VectorField u2 = u;
    for (auto& c : u2.comp) c *= 2.0;
    auto rec2 = monitor_snapshot(u2, consts, bank);
    REQUIRE(rec2.has_value());
    CHECK(rec2->linf == doctest::Approx(2.0 * rec->linf).epsilon(1e-13));
    CHECK(rec2->besov_m1 == doctest::Approx(2.0 * rec->besov_m1).epsilon(1e-13));
    if (!rec->scale_clamped && !rec2->scale_clamped)
        CHECK(rec2->scale == doctest::Approx(0.5 * rec->scale).epsilon(1e-13));
}

TEST_CASE("escape times: reference series and brute force") {
    CHECK(escape_time_indices({1.0, 3.0, 2.0, 4.0}) == std::vector<int>{0, 2});
    CHECK(escape_time_indices({}).empty());
    CHECK(escape_time_indices({5.0}).empty());
    CHECK(escape_time_indices({2.0, 2.0, 2.0}).empty());  // strict inequality

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::uniform_int_distribution<int> len(2, 40);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> s(std::size_t(len(rng)));
        for (auto& v : s) v = dist(rng);
        std::vector<int> brute;
        for (std::size_t k = 0; k + 1 < s.size(); ++k) {
            bool escape = true;
            for (std::size_t j = k + 1; j < s.size(); ++j)
                if (s[j] <= s[k]) escape = false;
            if (escape) brute.push_back(int(k));
        }
        CHECK(escape_time_indices(s) == brute);
    }
}

TEST_CASE("simulate emits the expected cadence and escape windows") {
    SimConfig cfg;
    cfg.n = 32;
    cfg.nu = 1.0;
    cfg.dt = 1e-3;
    cfg.t_end = 0.05;
    cfg.cadence = 10;
    cfg.preset = "shear";
    cfg.consts.M = compute_M();
    Trajectory traj = simulate(cfg);
    CHECK(traj.steps == 50);
    CHECK(traj.records.size() == 6);  // t = 0 plus every 10th step
    CHECK(traj.records.front().t == 0.0);
    CHECK(traj.records.back().t == doctest::Approx(0.05));
    // decaying sup norm: every non-final record is an escape time... none are,
    // since the series is decreasing
    CHECK(find_escape_times(traj).empty());

    for (const auto& e : find_escape_times(traj)) {
        CHECK(e.s_hi > e.s_lo);
        CHECK(e.s_lo > e.t);
    }
}
