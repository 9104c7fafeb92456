#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "smch/analysis.hpp"
#include "smch/errors.hpp"
#include "smch/integrator.hpp"
#include "smch/spectral.hpp"

using namespace smch;

namespace {

SolutionState gaussian(const GridSpec& g, double a, double w, double c = 0.0) {
    return SolutionState::from_m(0.0, Field::sample(g, [&](double x) { return a * std::exp(-std::pow((x - c) / w, 2)); }));
}

}  // namespace

TEST_CASE("zero state is a fixed point") {
    const auto g = make_grid(64, 10.0);
    const auto s = SolutionState::from_m(0.25, Field(g));
    const auto n = step_rk4(s, 0.1, {});
    CHECK(n.t == doctest::Approx(0.35));
    CHECK(n.m.max_abs() == 0.0);
    CHECK(n.u.max_abs() == 0.0);
}

TEST_CASE("dt = 0 leaves the state unchanged") {
    const auto s = gaussian(make_grid(128, 10.0), 1.0, 1.0);
    const auto n = step_rk4(s, 0.0, {});
    CHECK(n.t == s.t);
    CHECK(oracle::max_diff(n.m, s.m) == 0.0);
    CHECK_THROWS_AS(step_rk4(s, -1.0, {}), ConfigError);
}

TEST_CASE("RK4 is fourth order") {
    const auto s0 = gaussian(make_grid(256, 20.0), 1.0, 2.0);
    auto solve = [&](int steps) {
        SolutionState s = s0;
        for (int i = 0; i < steps; ++i) s = step_rk4(s, 0.5 / steps, {});
        return s.m;
    };
    const Field a = solve(5), b = solve(10), c = solve(20);
    const double ratio = oracle::max_diff(a, b) / oracle::max_diff(b, c);
    CHECK(ratio > 14.4);
    CHECK(ratio < 17.6);
}

TEST_CASE("non-finite state raises a numeric error") {
    auto s = gaussian(make_grid(64, 10.0), 1.0, 1.0);
    s.m[3] = NAN;
    CHECK_THROWS_AS(step_rk4(s, 0.1, {}), NumericError);
}

TEST_CASE("zero data reaches t_end with zero diagnostics") {
    StepperConfig cfg;
    cfg.t_end = 1.0;
    const auto out = run(SolutionState::from_m(0.0, Field(make_grid(64, 10.0))), cfg, {});
    CHECK(out.status == RunStatus::reached_t_end);
    CHECK(out.final_state.t == 1.0);
    for (const auto& r : out.history) {
        CHECK(r.h1 == 0.0);
        CHECK(r.m_inf == 0.0);
        CHECK(r.blowup_integral == 0.0);
    }
}

TEST_CASE("step budget is honoured exactly") {
    StepperConfig cfg;
    cfg.max_steps = 5;
    cfg.fixed_dt = true;
    cfg.dt_init = 1e-3;
    int states = 0;
    RunSinks sinks;
    sinks.on_state = [&](const SolutionState&) { ++states; };
    const auto out = run(gaussian(make_grid(128, 10.0), 1.0, 1.0), cfg, {}, sinks);
    CHECK(out.status == RunStatus::step_budget_exhausted);
    CHECK(out.steps == 5);
    CHECK(states == 6);
}

TEST_CASE("invalid stepper settings") {
    StepperConfig cfg;
    cfg.cfl = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.cfl = 1.5;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.dt_init = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.record_every = 0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("adaptive steps respect the CFL bound and grow at most twofold") {
    const auto g = make_grid(256, 20.0);
    StepperConfig cfg;
    cfg.t_end = 1.0;
    cfg.dt_init = 1e-4;
    cfg.tol = 1e-7;
    std::vector<SolutionState> states;
    RunSinks sinks;
    sinks.on_state = [&](const SolutionState& s) { states.push_back(s); };
    const auto out = run(gaussian(g, 1.0, 2.0), cfg, {}, sinks);
    REQUIRE(out.status == RunStatus::reached_t_end);
    REQUIRE(states.size() > 3);
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
        const double dt = states[i + 1].t - states[i].t;
        const Field V = velocity(states[i].u, derivative(states[i].u));
        CHECK(dt <= cfg.cfl * g.spacing() / std::max(V.max_abs(), 1e-12) * (1 + 1e-12));
        if (prev > 0.0) CHECK(dt <= 2.0 * prev * (1 + 1e-12));
        prev = dt;
    }
}

TEST_CASE("runs are deterministic") {
    StepperConfig cfg;
    cfg.t_end = 0.5;
    const auto s = gaussian(make_grid(256, 20.0), 1.0, 2.0);
    const auto a = run(s, cfg, {});
    const auto b = run(s, cfg, {});
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) CHECK(a.history[i] == b.history[i]);
    CHECK(oracle::max_diff(a.final_state.m, b.final_state.m) == 0.0);
}

TEST_CASE("records are emitted at the configured cadence") {
    StepperConfig cfg;
    cfg.fixed_dt = true;
    cfg.dt_init = 0.01;
    cfg.t_end = 0.25;
    cfg.record_every = 10;
    const auto out = run(gaussian(make_grid(128, 10.0), 0.5, 1.0), cfg, {});
    CHECK(out.steps == 25);
    // t = 0, steps 10 and 20, final
    REQUIRE(out.history.size() == 4);
    CHECK(out.history.back().t == 0.25);
    for (std::size_t i = 1; i < out.history.size(); ++i) CHECK(out.history[i].blowup_integral >= out.history[i - 1].blowup_integral);
}

TEST_CASE("mass near the seam stops the run") {
    const auto g = make_grid(256, 10.0);
    const auto out = run(gaussian(g, 1.0, 0.5, 9.5), StepperConfig{}, {});
    CHECK(out.status == RunStatus::domain_contaminated);
    CHECK(seam_magnitude(out.final_state.m, 0.9) > 1e-6);
}

TEST_CASE("steep positive data breaks before twice the certificate horizon") {
    const auto g = make_grid(16384, 10.0);
    const auto s0 = gaussian(g, 30.0, 0.02);
    const auto cert = certify(s0, 1.0);
    REQUIRE(cert.fires);
    StepperConfig cfg;
    cfg.t_end = 2.0 * cert.xi;
    cfg.dt_init = 1e-4;
    cfg.max_m_inf = 40.0;
    cfg.record_every = 1;
    const auto out = run(s0, cfg, {});
    REQUIRE(out.status == RunStatus::blowup_detected);
    CHECK(out.blowup_reason == "m_inf_threshold");
    CHECK(out.final_state.m.max_abs() >= cfg.max_m_inf);
    CHECK(out.final_state.t < cfg.t_end);
    const auto& h = out.history;
    const std::size_t n = h.size();
    REQUIRE(n >= 20);
    for (std::size_t i = n - n / 5; i < n; ++i) CHECK(h[i].min_M < h[i - 1].min_M);
    const std::size_t d = n / 10;
    CHECK(h[n - 1].blowup_integral - h[n - 1 - d].blowup_integral > h[d].blowup_integral - h[0].blowup_integral);
}
