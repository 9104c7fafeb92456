#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "smch/errors.hpp"
#include "smch/integrator.hpp"
#include "smch/records.hpp"
#include "smch/scenario.hpp"
#include "smch/snapshot.hpp"

using namespace smch;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({"grid": {"n": 256, "L": 20}, "initial_data": {"kind": "gaussian_bump"}})";

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "smch_test_scenario_io";
    fs::create_directories(dir);
    return dir / name;
}

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal document takes defaults") {
    const auto s = parse_scenario(kMinimal);
    CHECK(s.n == 256);
    CHECK(s.L == 20.0);
    CHECK(s.initial_data.kind == InitialKind::gaussian_bump);
    CHECK(s.initial_data.floor == 0.0);
    CHECK(s.stepper.cfl == 0.3);
    CHECK(s.stepper.record_every == 10);
    CHECK(s.certificate.enabled);
    CHECK(s.certificate.C == 1.0);
    CHECK(s.picard == PicardConfig{});
    CHECK(s.model.mode == ModelMode::sine);
}

TEST_CASE("schema violations name the offending key") {
    CHECK(error_of(R"({"grid": {"n": 256, "L": 20}, "initial_data": {"kind": "gaussian_bump", "width": -1}})")
              .find("initial_data.width") != std::string::npos);
    CHECK(error_of(R"({"grid": {"n": 256, "L": 20}, "initial_data": {"kind": "gaussian_bump", "colour": 1}})")
              .find("initial_data.colour") != std::string::npos);
    CHECK(error_of(R"({"grid": {"n": 256, "L": 20}, "stepper": {"cfl": "fast"}})").find("stepper.cfl") !=
          std::string::npos);
    CHECK(error_of(R"({"grid": {"n": 255, "L": 20}})").find("grid") != std::string::npos);
    CHECK(error_of(R"({"grid": {"n": 256, "L": 20}, "initial_data": {"kind": "triangle"}})")
              .find("initial_data.kind") != std::string::npos);
    CHECK_FALSE(error_of("{").empty());
    CHECK_FALSE(error_of("[]").empty());
}

TEST_CASE("serialize then parse is the identity") {
    Scenario s = parse_scenario(kMinimal);
    s.initial_data.kind = InitialKind::shifted_pair;
    s.initial_data.centers = {0.0, 0.004};
    s.initial_data.amplitude2 = 0.3;
    s.stepper.fixed_dt = true;
    s.stepper.dt_init = 1.0 / 3.0;
    s.seeds = {-0.1, 0.2};
    s.picard.r = kInfinity;
    s.model.mode = ModelMode::mch;
    s.limit_check.epsilons = {0.4, 0.2};
    const Scenario back = parse_scenario(serialize_scenario(s));
    CHECK(back == s);
    CHECK(serialize_scenario(back) == serialize_scenario(s));
}

TEST_CASE("dotted overrides") {
    const auto s = parse_scenario(kMinimal, {{"stepper.t_end", "0.25"},
                                              {"initial_data.kind", "sech_bump"},
                                              {"seeds", "[0.5]"},
                                              {"picard.r", "\"inf\""}});
    CHECK(s.stepper.t_end == 0.25);
    CHECK(s.initial_data.kind == InitialKind::sech_bump);
    CHECK(s.seeds == std::vector<double>{0.5});
    CHECK(std::isinf(s.picard.r));
    CHECK_THROWS_AS(parse_scenario(kMinimal, {{"stepper.bogus", "1"}}), ConfigError);
}

TEST_CASE("initial data families") {
    const auto g = make_grid(256, 20.0);
    InitialDataFamily f;
    f.amplitude = 0.0;
    CHECK(build_initial_m(f, g).max_abs() == 0.0);
    f.amplitude = 1.0;
    f.width = 1.0;
    const Field m = build_initial_m(f, g);
    CHECK(m[g.n / 2] == 1.0);
    std::vector<std::string> warnings;
    f.width = 6.0;
    build_initial_m(f, g, &warnings);
    CHECK(warnings.size() == 1);
    for (auto kind : {InitialKind::gaussian_bump, InitialKind::sech_bump, InitialKind::shifted_pair}) {
        f.kind = kind;
        f.width = 1.0;
        CHECK(build_initial_m(f, g).min() >= 0.0);
    }
    f.kind = InitialKind::single_mode;
    f.mode = 3;
    const Field c = build_initial_m(f, g);
    CHECK(c[0] == doctest::Approx(std::cos(3.0 * std::numbers::pi * (g.x(0) + g.half_length) / g.half_length)));
}

TEST_CASE("snapshot round trip is bit identical") {
    const auto g = make_grid(128, 7.5);
    std::mt19937_64 rng(3);
    const auto s = SolutionState::from_m(0.375, oracle::random_bumps(rng, g));
    const auto path = scratch("a.smch").string();
    save_snapshot(s, path);
    const auto back = load_snapshot(path);
    CHECK(back.t == s.t);
    CHECK(back.grid().n == g.n);
    CHECK(back.grid().half_length == g.half_length);
    CHECK(std::memcmp(back.m.values().data(), s.m.values().data(), g.n * sizeof(double)) == 0);
    CHECK(encode_snapshot(back) == encode_snapshot(s));
}

TEST_CASE("damaged snapshots are rejected") {
    const auto g = make_grid(64, 5.0);
    const auto bytes = encode_snapshot(SolutionState::from_m(0.0, Field(g)));
    auto truncated = bytes;
    truncated.resize(bytes.size() - 8);
    CHECK_THROWS_AS(decode_snapshot(truncated), FormatError);
    auto header_only = bytes;
    header_only.resize(10);
    CHECK_THROWS_AS(decode_snapshot(header_only), FormatError);
    auto magic = bytes;
    magic[0] ^= 0xff;
    CHECK_THROWS_AS(decode_snapshot(magic), FormatError);
    auto version = bytes;
    version[4] = 99;
    CHECK_THROWS_AS(decode_snapshot(version), FormatError);
    CHECK_THROWS_AS(load_snapshot(scratch("missing.smch").string()), ConfigError);
}

TEST_CASE("from_file reproduces the saved field") {
    const auto g = make_grid(128, 10.0);
    std::mt19937_64 rng(11);
    const auto s = SolutionState::from_m(0.0, oracle::random_bumps(rng, g));
    const auto path = scratch("m0.smch").string();
    save_snapshot(s, path);
    InitialDataFamily f;
    f.kind = InitialKind::from_file;
    f.path = path;
    const Field m = build_initial_m(f, g);
    CHECK(std::memcmp(m.values().data(), s.m.values().data(), g.n * sizeof(double)) == 0);
    CHECK_THROWS_AS(build_initial_m(f, make_grid(64, 10.0)), ConfigError);
}

TEST_CASE("resumed run matches the uninterrupted run") {
    const auto g = make_grid(256, 20.0);
    const auto s0 = SolutionState::from_m(0.0, Field::sample(g, [](double x) { return std::exp(-x * x / 4.0); }));
    StepperConfig cfg;
    cfg.fixed_dt = true;
    cfg.dt_init = 1e-2;
    cfg.t_end = 1.0;
    const auto full = run(s0, cfg, {});
    cfg.t_end = 0.5;
    const auto half = run(s0, cfg, {});
    const auto path = scratch("half.smch").string();
    save_snapshot(half.final_state, path);
    cfg.t_end = 1.0;
    const auto resumed = run(load_snapshot(path), cfg, {});
    REQUIRE(resumed.status == RunStatus::reached_t_end);
    CHECK(resumed.final_state.t == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(oracle::max_diff(resumed.final_state.m, full.final_state.m) < 1e-9);
}

TEST_CASE("NDJSON numbers round trip") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1e3, 1e3);
    for (int i = 0; i < 200; ++i) {
        DiagnosticsRecord r{U(rng), U(rng), U(rng) * 1e-9, U(rng), U(rng), U(rng) * 1e12, U(rng), U(rng), U(rng)};
        const std::string line = to_ndjson(r);
        CHECK(line.find('\n') == std::string::npos);
        CHECK(diagnostics_from_ndjson(line) == r);
        CHECK(nlohmann::json::accept(line));
    }
    DiagnosticsRecord bad;
    bad.min_M = -INFINITY;
    CHECK(nlohmann::json::parse(to_ndjson(bad))["min_M"].is_null());
    CHECK_THROWS_AS(diagnostics_from_ndjson("{\"t\": 1"), FormatError);
}

TEST_CASE("CSV diagnostics") {
    std::ostringstream os;
    write_diagnostics_csv(os, {DiagnosticsRecord{}, DiagnosticsRecord{}});
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,h1,m_inf,min_M,blowup_integral");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("parsing never crashes") {
    const std::string base = serialize_scenario(parse_scenario(kMinimal));
    std::mt19937_64 rng(99);
    const std::string alphabet = "{}[]\":,0123456789.-eE truefalsnul";
    int accepted = 0;
    for (int i = 0; i < 2000; ++i) {
        std::string doc = base;
        const int edits = 1 + static_cast<int>(rng() % 4);
        for (int e = 0; e < edits; ++e) {
            const std::size_t pos = rng() % doc.size();
            switch (rng() % 3) {
                case 0: doc[pos] = alphabet[rng() % alphabet.size()]; break;
                case 1: doc.erase(pos, 1 + rng() % 8); break;
                default: doc.insert(pos, 1, alphabet[rng() % alphabet.size()]);
            }
        }
        try {
            parse_scenario(doc);
            ++accepted;
        } catch (const ConfigError&) {
        }
    }
    CHECK(accepted < 2000);
}
