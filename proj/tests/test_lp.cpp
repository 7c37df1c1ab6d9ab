#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mixnorm/fft.hpp"
#include "mixnorm/lp.hpp"

using namespace mixnorm;

namespace {

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

}  // namespace

TEST_CASE("multipliers partition unity on retained modes") {
    Grid3 g(32, 2.0 * M_PI);
    LPBank bank = build_lp_bank(g);
    CHECK(bank.jmin == -1);
    CHECK(bank.jmax == 3);
    Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(bank.phi(-1).size());
    for (int j = bank.jmin; j <= bank.jmax; ++j) {
        CHECK((bank.phi(j) >= -1e-15).all());
        CHECK((bank.phi(j) <= 1.0 + 1e-15).all());
        sum += bank.phi(j);
    }
    CHECK((sum - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("blocks reconstruct dealiased fields") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        Grid3 g(32, 2.0 * M_PI);
        ScalarField f = random_dealiased(g, seed);
        LPBank bank = build_lp_bank(g);
        Eigen::ArrayXd recon = Eigen::ArrayXd::Zero(g.size());
        for (int j = bank.jmin; j <= bank.jmax; ++j) recon += lp_block(f, bank, j).data;
        CHECK((recon - f.data).abs().maxCoeff() < 1e-10 * linf_norm(f));
    }
}

TEST_CASE("single cosine lands in one annulus") {
    Grid3 g(32, 2.0 * M_PI);
    LPBank bank = build_lp_bank(g);
    // |k| = 3 sits in the j = 1 annulus: 3/2^1 in [4/3, 3/2]
    struct Mode { int kx, ky, kz, j; };
    for (Mode m : {Mode{3, 0, 0, 1}, Mode{2, 2, 1, 1}, Mode{6, 0, 0, 2}, Mode{4, 4, 2, 2}}) {
        const double amp = 1.7;
        ScalarField f = cosine_mode(g, m.kx, m.ky, m.kz, amp);
        const double sup = linf_norm(f);  // cell-center sup, may be below amp
        for (double s : {-1.0, -0.5, 0.0}) {
            BesovResult r = besov_inf_inf(f, s, bank);
            CHECK(r.attaining_j == m.j);
            CHECK(r.value == doctest::Approx(std::pow(2.0, m.j * s) * sup).epsilon(1e-10));
        }
    }
}

TEST_CASE("besov norms are absolutely homogeneous") {
    Grid3 g(32, 2.0 * M_PI);
    LPBank bank = build_lp_bank(g);
    ScalarField f = random_dealiased(g, 9);
    ScalarField af(g, (-3.25 * f.data).eval());
    for (double s : {-1.0, 0.0, 0.5})
        CHECK(besov_inf_inf(af, s, bank).value ==
              doctest::Approx(3.25 * besov_inf_inf(f, s, bank).value).epsilon(1e-13));
    for (double eps : {0.5, 1.0})
        CHECK(besov_11_fd(af, eps, g.L() / 4.0) ==
              doctest::Approx(3.25 * besov_11_fd(f, eps, g.L() / 4.0)).epsilon(1e-13));
}

TEST_CASE("vector norm is the component max") {
    Grid3 g(32, 2.0 * M_PI);
    LPBank bank = build_lp_bank(g);
    VectorField u(g);
    u.comp[0] = cosine_mode(g, 3, 0, 0, 1.0).data;
    u.comp[1] = cosine_mode(g, 6, 0, 0, 2.0).data;
    u.comp[2] = cosine_mode(g, 3, 0, 0, 0.5).data;
    BesovResult r = besov_inf_inf(u, 0.0, bank);
    double expect = 0.0;
    for (int c = 0; c < 3; ++c)
        expect = std::max(expect, besov_inf_inf(u.component(c), 0.0, bank).value);
    CHECK(r.value == expect);
    CHECK(r.attaining_component == 1);
}

TEST_CASE("block kernels are summable") {
    Grid3 g(32, 2.0 * M_PI);
    LPBank bank = build_lp_bank(g);
    ScalarField delta(g);
    delta(0, 0, 0) = 1.0;
    for (int j = bank.jmin; j <= bank.jmax; ++j) {
        // l1 kernel norm controls ||Delta_j||_{inf->inf}
        Fft3& fft = fft_for(g);
        SpectralField s = fft.forward(delta.data);
        s *= bank.phi(j);
        double k1 = fft.inverse(s).abs().sum();
        CHECK(k1 <= 10.0);
    }
}

TEST_CASE("subtract_mean removes only the mean block contribution") {
    Grid3 g(32, 2.0 * M_PI);
    LPBank bank = build_lp_bank(g);
    ScalarField f = cosine_mode(g, 3, 0, 0, 1.0);
    f.data += 5.0;  // constant offset lives entirely in the low block
    BesovResult with = besov_inf_inf(f, 0.0, bank, false);
    BesovResult without = besov_inf_inf(f, 0.0, bank, true);
    CHECK(with.attaining_j == -1);
    CHECK(without.attaining_j == 1);
    CHECK(without.value == doctest::Approx(linf_norm(cosine_mode(g, 3, 0, 0, 1.0))));
}

TEST_CASE("finite-difference norm: constants and exact translation invariance") {
    Grid3 g(32, 4.0);
    ScalarField c(g, Eigen::ArrayXd::Constant(g.size(), -2.0));
    for (double eps : {0.5, 1.0})
        CHECK(besov_11_fd(c, eps, g.L() / 4.0) ==
              doctest::Approx(2.0 * std::pow(g.L(), 3)).epsilon(1e-13));

    ScalarField f = random_dealiased(g, 17);
    ScalarField shifted(g);
    for (int k = 0; k < g.n(); ++k)
        for (int j = 0; j < g.n(); ++j)
            for (int i = 0; i < g.n(); ++i)
                shifted(i, j, k) = f(g.wrap(i + 5), g.wrap(j - 3), g.wrap(k + 11));
    for (double eps : {0.5, 1.0})
        CHECK(besov_11_fd(shifted, eps, g.L() / 4.0) ==
              doctest::Approx(besov_11_fd(f, eps, g.L() / 4.0)).epsilon(1e-14));

    CHECK_THROWS_AS(besov_11_fd(f, 0.0, g.L() / 4.0), InvalidInput);
    CHECK_THROWS_AS(besov_11_fd(f, 1.5, g.L() / 4.0), InvalidInput);
}

TEST_CASE("dual lower bound") {
    Grid3 g(32, 2.0 * M_PI);
    ScalarField f = cosine_mode(g, 3, 0, 0, 1.0);
    const double lb = dual_lower_bound(f, f, 1.0);
    CHECK(lb > 0.0);
    // pairing a field with itself scales linearly in the left argument
    ScalarField af(g, (2.0 * f.data).eval());
    CHECK(dual_lower_bound(af, f, 1.0) == doctest::Approx(2.0 * lb).epsilon(1e-13));
    ScalarField z(g);
    CHECK_THROWS_AS(dual_lower_bound(f, z, 1.0), DegenerateTestFunction);
}
