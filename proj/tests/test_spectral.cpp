#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "oracles.hpp"
#include "smch/errors.hpp"
#include "smch/spectral.hpp"

using namespace smch;

TEST_CASE("derivative of a single mode") {
    const auto g = make_grid(128, 3.0);
    const double k = M_PI / 3.0 * 7;
    const Field f = Field::sample(g, [&](double x) { return std::cos(k * x); });
    const Field want = Field::sample(g, [&](double x) { return -k * std::sin(k * x); });
    CHECK(oracle::max_diff(derivative(f), want) < 1e-12 * k);
}

TEST_CASE("derivative of a constant vanishes") {
    const auto g = make_grid(64, 2.0);
    const Field f = Field::sample(g, [](double) { return 3.5; });
    CHECK(derivative(f).max_abs() < 1e-14);
}

TEST_CASE("derivative of band-limited data agrees with the analytic series") {
    std::mt19937_64 rng(11);
    const auto g = make_grid(256, 5.0);
    const auto t = oracle::random_trig(rng, 5.0, 256 / 3, 12);
    CHECK(oracle::max_diff(derivative(t.field(g)), t.field(g, 1)) < 1e-9);
    CHECK(oracle::max_diff(second_derivative(t.field(g)), t.field(g, 2)) < 1e-6);
}

TEST_CASE("centered differences converge to the spectral derivative at second order") {
    std::mt19937_64 rng(5);
    // Top third of the coarse spectrum left empty.
    const auto t = oracle::random_trig(rng, 4.0, 20, 6);
    auto fd_error = [&](std::size_t n) {
        const auto g = make_grid(n, 4.0);
        const Field f = t.field(g);
        const Field d = derivative(f);
        double err = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double fd = (f[(j + 1) % n] - f[(j + n - 1) % n]) / (2.0 * g.spacing());
            err = std::max(err, std::abs(fd - d[j]));
        }
        return err;
    };
    const double ratio = fd_error(128) / fd_error(256);
    CHECK(ratio > 3.8);
    CHECK(ratio < 4.2);
}

TEST_CASE("helmholtz_solve inverts 1 - d^2") {
    const auto g = make_grid(128, 4.0);
    const double k = M_PI / 4.0 * 5;
    const Field m = Field::sample(g, [&](double x) { return (1 + k * k) * std::cos(k * x); });
    const Field u = Field::sample(g, [&](double x) { return std::cos(k * x); });
    CHECK(oracle::max_diff(helmholtz_solve(m), u) < 1e-12);
    CHECK(helmholtz_solve(Field(g)).max_abs() == 0.0);
}

TEST_CASE("helmholtz round trip on random fields") {
    std::mt19937_64 rng(3);
    const auto g = make_grid(512, 10.0);
    for (int trial = 0; trial < 5; ++trial) {
        const auto t = oracle::random_trig(rng, 10.0, 200, 10);
        const Field m = t.field(g);
        const Field u = helmholtz_solve(m);
        CHECK(oracle::max_diff(u, t.field(g, 0, 1)) < 1e-12);
        const Field back = u - derivative(derivative(u));
        CHECK(oracle::max_diff(back, m) / m.max_abs() < 1e-10);
        CHECK(oracle::max_diff(helmholtz_apply(u), m) / m.max_abs() < 1e-10);
    }
}

TEST_CASE("one-sided Green's convolutions match the closed forms for a Gaussian") {
    const auto g = make_grid(1024, 20.0);
    const Field f = Field::sample(g, [](double x) { return std::exp(-x * x); });
    const Field pp = convolve_p_plus(f);
    const Field pm = convolve_p_minus(f);
    double ep = 0.0, em = 0.0, e = 0.0;
    const Field pf = convolve_p(f);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        ep = std::max(ep, std::abs(pp[j] - oracle::gauss_p_plus(x)));
        em = std::max(em, std::abs(pm[j] - oracle::gauss_p_minus(x)));
        e = std::max(e, std::abs(pf[j] - oracle::gauss_p(x)));
    }
    // The periodic images contribute about e^{-20} at the centre.
    CHECK(ep < 1e-8);
    CHECK(em < 1e-8);
    CHECK(e < 1e-8);
}

TEST_CASE("Green's function identities on random seam-decayed fields") {
    std::mt19937_64 rng(17);
    const auto g = make_grid(1024, 20.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Field f = oracle::random_bumps(rng, g);
        const Field pf = convolve_p(f);
        const Field pp = convolve_p_plus(f);
        const Field pm = convolve_p_minus(f);
        CHECK(oracle::max_diff(pp + pm, pf) < 1e-9);
        CHECK(oracle::max_diff(pm - pp, convolve_p_x(f)) < 1e-9);
        CHECK(oracle::max_diff(second_derivative(pf), pf - f) < 1e-9);
    }
}

TEST_CASE("p_x is the derivative of p") {
    std::mt19937_64 rng(23);
    const auto g = make_grid(256, 6.0);
    const auto t = oracle::random_trig(rng, 6.0, 100, 8);
    CHECK(oracle::max_diff(convolve_p_x(t.field(g)), t.field(g, 1, 1)) < 1e-12);
}

TEST_CASE("dealiased product is exact for band-limited factors") {
    const auto g = make_grid(64, 2.0);
    const double k1 = M_PI / 2.0 * 9, k2 = M_PI / 2.0 * 13;
    const Field a = Field::sample(g, [&](double x) { return std::cos(k1 * x); });
    const Field b = Field::sample(g, [&](double x) { return std::sin(k2 * x); });
    const Field want = Field::sample(g, [&](double x) { return std::cos(k1 * x) * std::sin(k2 * x); });
    CHECK(oracle::max_diff(dealiased_product(a, b), want) < 1e-13);
}

TEST_CASE("dealiased product drops modes beyond the grid") {
    const auto g = make_grid(64, 2.0);
    const double k = M_PI / 2.0 * 20;
    const Field a = Field::sample(g, [&](double x) { return std::cos(k * x); });
    // cos^2 = 1/2 + cos(2kx)/2 and mode 40 is not resolved on 64 points.
    const Field p = dealiased_product(a, a);
    for (std::size_t j = 0; j < g.n; ++j) CHECK(p[j] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("trigonometric interpolation reproduces the series off the grid") {
    std::mt19937_64 rng(29);
    const auto g = make_grid(256, 3.0);
    const auto t = oracle::random_trig(rng, 3.0, 120, 10);
    const Field f = t.field(g);
    for (double x : {-2.9917, -1.0001, 0.123456, 1.5, 2.99}) CHECK(interpolate(f, x) == doctest::Approx(t.eval(x)).epsilon(1e-11));
}

TEST_CASE("sobolev norm of a single mode") {
    const auto g = make_grid(128, 4.0);
    const double k = M_PI / 4.0 * 3;
    const Field f = Field::sample(g, [&](double x) { return std::cos(k * x); });
    CHECK(sobolev_norm(f, 1.0) == doctest::Approx(std::sqrt((1 + k * k) * 4.0)).epsilon(1e-12));
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(f.l2_norm()).epsilon(1e-12));
}

TEST_CASE("non-finite input is rejected") {
    const auto g = make_grid(32, 1.0);
    Field f(g);
    f[2] = INFINITY;
    CHECK_THROWS_AS(derivative(f), NumericError);
    CHECK_THROWS_AS(helmholtz_solve(f), NumericError);
    CHECK_THROWS_AS(convolve_p_plus(f), NumericError);
    CHECK_THROWS_AS(convolve_p_minus(f), NumericError);
}

TEST_CASE("engines are independent across threads") {
    std::mt19937_64 rng(31);
    const auto g = make_grid(512, 8.0);
    const Field f = oracle::random_bumps(rng, g);
    const Field ref = helmholtz_solve(f);
    std::vector<Field> out(4);
    std::vector<std::thread> ts;
    for (int i = 0; i < 4; ++i) ts.emplace_back([&, i] { out[i] = helmholtz_solve(f); });
    for (auto& t : ts) t.join();
    for (const auto& o : out) CHECK(oracle::max_diff(o, ref) == 0.0);
}
