#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "smch/errors.hpp"
#include "smch/picard.hpp"
#include "smch/spectral.hpp"

using namespace smch;

namespace {

Field bump(const GridSpec& g, double a, double w) {
    return Field::sample(g, [&](double x) { return a * std::exp(-x * x / (w * w)); });
}

double sup_diff(const Trajectory& a, const Trajectory& b) {
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, oracle::max_diff(a[k], b[k]));
    return d;
}

}  // namespace

TEST_CASE("first iterate is the truncated data frozen in time") {
    const auto g = make_grid(256, 20.0);
    const auto P = build_partition(g);
    const Field m0 = bump(g, 0.1, 2.0);
    const Field m0_0 = friedrichs_data(m0, 0, P);
    const Trajectory zero(11, Field(g));
    const auto m1 = picard_step(zero, m0_0, 0.05);
    REQUIRE(m1.size() == 11);
    for (const auto& f : m1) CHECK(oracle::max_diff(f, m0_0) < 1e-15);
}

TEST_CASE("zero data gives zero iterates") {
    PicardConfig cfg;
    cfg.iterations = 4;
    cfg.T = 0.1;
    const auto r = run_picard(Field(make_grid(128, 20.0)), cfg);
    CHECK(r.rho == 0.0);
    for (double d : r.differences) CHECK(d == 0.0);
    for (double v : r.iterate_norms) CHECK(v == 0.0);
    CHECK(std::isinf(r.existence_bound));
}

TEST_CASE("transport response is linear in the source") {
    const auto g = make_grid(256, 20.0);
    const double dt = 0.02;
    const auto traj = solver_trajectory(bump(g, 0.5, 2.0), dt, 10);
    auto c = transport_coefficients(traj);
    const Field init = bump(g, 0.3, 1.5);
    const auto full = solve_linear_transport(c, init, dt);
    for (auto& s : c.source) s = Field(g);
    const auto homogeneous = solve_linear_transport(c, init, dt);
    auto c2 = transport_coefficients(traj);
    for (auto& s : c2.source)
        for (std::size_t i = 0; i < g.n; ++i) s[i] *= 2.0;
    const auto doubled = solve_linear_transport(c2, init, dt);
    for (std::size_t k = 0; k < full.size(); ++k)
        for (std::size_t i = 0; i < g.n; ++i) {
            const double once = full[k][i] - homogeneous[k][i];
            CHECK(std::abs(doubled[k][i] - homogeneous[k][i] - 2.0 * once) < 1e-10);
        }
}

TEST_CASE("solver trajectory is a fixed point of the step") {
    const auto g = make_grid(256, 20.0);
    const Field m0 = bump(g, 0.5, 2.0);
    const double dt = 0.01;
    const auto traj = solver_trajectory(m0, dt, 50);
    const auto next = picard_step(traj, m0, dt);
    CHECK(sup_diff(traj, next) < 1e-6);
}

// chi takes values strictly between 0 and 1 on resolved modes inside each transition band
TEST_CASE("Friedrichs truncation applied twice" * doctest::should_fail()) {
    const auto g = make_grid(1024, 20.0);
    const auto P = build_partition(g);
    std::mt19937_64 rng(7);
    const Field f = oracle::random_bumps(rng, g);
    for (int l : {0, 2, 4}) {
        const Field once = friedrichs_data(f, l, P);
        CHECK(oracle::max_diff(friedrichs_data(once, l, P), once) < 1e-12);
    }
}

TEST_CASE("Friedrichs truncation") {
    const auto g = make_grid(1024, 20.0);
    const auto P = build_partition(g);
    REQUIRE(P.max_q == 5);
    std::mt19937_64 rng(7);
    const Field f = oracle::random_bumps(rng, g);
    for (int l : {0, 1, 2}) {
        const Field once = friedrichs_data(f, l, P);
        CHECK(oracle::max_diff(friedrichs_data(once, l + 2, P), once) < 1e-12);
        CHECK(oracle::max_diff(friedrichs_data(friedrichs_data(f, l + 2, P), l, P), once) < 1e-12);
    }
    CHECK(oracle::max_diff(friedrichs_data(f, P.max_q, P), f) < 1e-12);
    CHECK(oracle::max_diff(friedrichs_data(f, P.max_q + 3, P), f) < 1e-12);
    // k = 20 pi, inside the q = 5 annulus only
    const Field mode = Field::sample(g, [](double x) { return std::cos(20.0 * std::numbers::pi * x); });
    CHECK(friedrichs_data(mode, 2, P).max_abs() < 1e-12);
}

TEST_CASE("truncation error decays with the level") {
    const auto g = make_grid(1024, 20.0);
    const auto P = build_partition(g);
    const Field f = Field::sample(g, [](double x) { return std::exp(-x * x / 0.02) + std::exp(-x * x); });
    std::vector<double> ls, logs;
    for (int l = 0; l < P.max_q; ++l) {
        const double d = besov_norm(Field(f) -= friedrichs_data(f, l, P), 0.0, 2.0, 2.0, P);
        ls.push_back(l);
        logs.push_back(std::log(d));
    }
    const double mx = std::accumulate(ls.begin(), ls.end(), 0.0) / ls.size();
    const double my = std::accumulate(logs.begin(), logs.end(), 0.0) / logs.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        num += (ls[i] - mx) * (logs[i] - my);
        den += (ls[i] - mx) * (ls[i] - mx);
    }
    CHECK(num / den < 0.0);
}

TEST_CASE("invalid Picard settings") {
    PicardConfig c;
    c.iterations = 1;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = {};
    c.T = 0.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = {};
    c.p = 0.5;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = {};
    c.dt = -1.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    CHECK_NOTHROW(validate(PicardConfig{}));
}

TEST_CASE("large horizon aborts") {
    const auto g = make_grid(256, 20.0);
    PicardConfig c;
    c.iterations = 3;
    c.T = 1.0;
    c.max_m_inf = 0.5;
    CHECK_THROWS_AS(run_picard(bump(g, 1.0, 2.0), c), HorizonTooLarge);
}
