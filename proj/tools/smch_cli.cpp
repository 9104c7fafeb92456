#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smch/analysis.hpp"
#include "smch/battery.hpp"
#include "smch/characteristics.hpp"
#include "smch/errors.hpp"
#include "smch/integrator.hpp"
#include "smch/picard.hpp"
#include "smch/records.hpp"
#include "smch/scenario.hpp"
#include "smch/snapshot.hpp"

namespace fs = std::filesystem;
using namespace smch;

namespace {

enum Exit { kOk = 0, kError = 1, kBroke = 2, kIdentityFailure = 3 };

struct Options {
    std::string scenario;
    std::vector<std::string> sets;
    std::string out;
    double c_const = 0.0;
    bool c_given = false;
    std::string epsilons;
};

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return "config_error";
    if (dynamic_cast<const NumericError*>(&e)) return "numeric_error";
    if (dynamic_cast<const FormatError*>(&e)) return "format_error";
    if (dynamic_cast<const DomainContaminationError*>(&e)) return "domain_contamination";
    if (dynamic_cast<const HypothesisViolation*>(&e)) return "hypothesis_violation";
    if (dynamic_cast<const InvariantViolation*>(&e)) return "invariant_violation";
    if (dynamic_cast<const UnsupportedConfiguration*>(&e)) return "unsupported_configuration";
    if (dynamic_cast<const HorizonTooLarge*>(&e)) return "horizon_too_large";
    return "error";
}

void report_error(const std::string& kind, const std::string& message) {
    std::cerr << JsonLine{}.add("error", kind).add("message", message).str() << '\n';
}

std::vector<std::pair<std::string, std::string>> parse_sets(const std::vector<std::string>& sets) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + s + "'");
        out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return out;
}

struct Context {
    Scenario scenario;
    fs::path out;
    Field m0;
};

Context prepare(const Options& o) {
    if (o.scenario.empty()) throw ConfigError("--scenario is required");
    Context c;
    c.scenario = load_scenario(o.scenario, parse_sets(o.sets));
    c.out = o.out.empty() ? fs::path(c.scenario.outputs.dir) : fs::path(o.out);
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) throw ConfigError("cannot create output directory " + c.out.string() + ": " + ec.message());
    std::ofstream(c.out / "scenario.json", std::ios::trunc) << serialize_scenario(c.scenario) << '\n';
    std::vector<std::string> warnings;
    c.m0 = build_initial_m(c.scenario.initial_data, c.scenario.grid(), &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return c;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::trunc);
    if (!os) throw ConfigError("cannot write " + p.string());
    return os;
}

int cmd_simulate(const Options& o) {
    auto c = prepare(o);
    auto nd = open_out(c.out / "diagnostics.ndjson");
    RunSinks sinks;
    sinks.on_record = [&](const DiagnosticsRecord& r) { nd << to_ndjson(r) << '\n'; };
    const auto outcome = run(SolutionState::from_m(0.0, c.m0), c.scenario.stepper, c.scenario.model, sinks);
    nd.flush();
    if (c.scenario.outputs.write_csv) {
        auto csv = open_out(c.out / "diagnostics.csv");
        write_diagnostics_csv(csv, outcome.history);
    }
    if (c.scenario.outputs.write_snapshot) save_snapshot(outcome.final_state, (c.out / "final.smch").string());
    {
        JsonLine s;
        s.add("status", to_string(outcome.status))
            .add("t", outcome.final_state.t)
            .add("steps", outcome.steps)
            .add("rejected_steps", outcome.rejected_steps)
            .add("min_dt", outcome.min_dt)
            .add("blowup_reason", outcome.blowup_reason);
        auto os = open_out(c.out / "summary.json");
        os << s.str() << '\n';
        std::cout << s.str() << '\n';
    }
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
    switch (outcome.status) {
        case RunStatus::reached_t_end: return kOk;
        case RunStatus::blowup_detected: return kBroke;
        default: return kError;
    }
}

double certificate_constant(const Options& o, const Scenario& s) { return o.c_given ? o.c_const : s.certificate.C; }

int cmd_certify(const Options& o) {
    auto c = prepare(o);
    const auto cert = certify(SolutionState::from_m(0.0, c.m0), certificate_constant(o, c.scenario));
    const std::string line = to_ndjson(cert);
    auto os = open_out(c.out / "certificate.ndjson");
    os << line << '\n';
    std::cout << line << '\n';
    return cert.fires ? kBroke : kOk;
}

int cmd_characteristics(const Options& o) {
    auto c = prepare(o);
    const auto& sc = c.scenario;
    const SolutionState s0 = SolutionState::from_m(0.0, c.m0);
    FieldHistory hist(sc.grid());
    std::uint64_t accepted = 0;
    RunSinks sinks;
    sinks.on_state = [&](const SolutionState& s) {
        if (accepted++ % sc.outputs.history_every == 0) hist.push_state(s);
    };
    const auto outcome = run(s0, sc.stepper, sc.model, sinks);
    if (hist.times().back() < outcome.final_state.t) hist.push_state(outcome.final_state);

    std::vector<double> seeds = resolve_seeds(sc, c.m0);
    BreakingCertificate cert;
    bool have_cert = false;
    if (sc.certificate.enabled) {
        try {
            cert = certify(s0, certificate_constant(o, sc));
            have_cert = true;
            if (std::find(seeds.begin(), seeds.end(), cert.x0) == seeds.end()) seeds.push_back(cert.x0);
        } catch (const HypothesisViolation& e) {
            std::cerr << "warning: certificate skipped: " << e.what() << '\n';
        }
    }
    AdvectOptions opt;
    opt.fd_spacing = sc.characteristics.fd_spacing;
    opt.substeps = sc.characteristics.substeps;
    const auto bundle = advect(seeds, hist, opt);
    {
        auto csv = open_out(c.out / "characteristics.csv");
        write_bundle_csv(csv, bundle);
    }
    auto nd = open_out(c.out / "characteristics.ndjson");
    const auto checks = check_characteristics(bundle);
    JsonLine line;
    line.add("status", to_string(outcome.status))
        .add("qx_rel", checks.qx_rel)
        .add("mbar_rel", checks.mbar_rel)
        .add("product_rel", checks.product_rel)
        .add("sign_violations", static_cast<std::uint64_t>(checks.sign_violations))
        .add("ode_rel", checks.ode_rel)
        .add("monotone_violations", static_cast<std::uint64_t>(checks.monotone_violations));
    nd << line.str() << '\n';
    std::cout << line.str() << '\n';
    if (have_cert) {
        nd << to_ndjson(cert) << '\n';
        const auto env = envelope_check(bundle, cert, sobolev_norm(s0.u, 1.0));
        nd << JsonLine{}
                  .add("C1_empirical", env.C1_empirical)
                  .add("C1_riccati_empirical", env.C1_riccati_empirical)
                  .add("C_riccati_empirical", env.C_riccati_empirical)
                  .add("inverse_positive", env.inverse_positive)
                  .add("envelope_holds", env.envelope_holds)
                  .add("max_envelope_excess", env.max_envelope_excess)
                  .add("samples", static_cast<std::uint64_t>(env.samples))
                  .str()
           << '\n';
    }
    if (outcome.status == RunStatus::blowup_detected) return kBroke;
    return outcome.status == RunStatus::reached_t_end ? kOk : kError;
}

int cmd_picard(const Options& o) {
    auto c = prepare(o);
    const auto rep = run_picard(c.m0, c.scenario.picard);
    const std::string line = to_ndjson(rep);
    auto os = open_out(c.out / "picard.ndjson");
    os << line << '\n';
    std::cout << line << '\n';
    if (c.scenario.outputs.dump_iterates) {
        for (std::size_t i = 0; i < rep.final_iterate.size(); ++i) {
            char name[64];
            std::snprintf(name, sizeof name, "picard_final_%05zu.smch", i);
            save_snapshot(SolutionState::from_m(rep.dt * static_cast<double>(i), rep.final_iterate[i]),
                          (c.out / name).string());
        }
    }
    return kOk;
}

std::vector<double> parse_epsilons(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--epsilons: cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("--epsilons: empty list");
    return out;
}

int cmd_limit_check(const Options& o) {
    auto c = prepare(o);
    const auto eps = o.epsilons.empty() ? c.scenario.limit_check.epsilons : parse_epsilons(o.epsilons);
    const auto res = run_limit_check(c.scenario, eps);
    std::ostringstream csv;
    csv << "epsilon,sup_diff,cubic_diff,fitted_order\n";
    for (const auto& r : res.rows) {
        csv << format_number(r.epsilon) << ',' << format_number(r.sup_diff) << ',' << format_number(r.cubic_diff)
            << ',' << format_number(res.fitted_order) << '\n';
    }
    auto os = open_out(c.out / "limit_check.csv");
    os << csv.str();
    std::cout << csv.str();
    return kOk;
}

int cmd_identities(const Options& o) {
    auto c = prepare(o);
    const auto results = run_identities(c.scenario);
    auto os = open_out(c.out / "identities.ndjson");
    bool ok = true;
    for (const auto& r : results) {
        const std::string line = to_ndjson(r);
        os << line << '\n';
        std::cout << line << '\n';
        if (!r.passed) {
            ok = false;
            std::cerr << "identity failed: " << r.name << " (" << format_number(r.value) << " > "
                      << format_number(r.tolerance) << ")\n";
        }
    }
    return ok ? kOk : kIdentityFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral laboratory for the sine-nonlinearity modified Camassa-Holm equation"};
    app.require_subcommand(1, 1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
        sub->add_option("--set", o.sets, "Dotted-path override KEY=VALUE (repeatable)");
        sub->add_option("--out", o.out, "Output directory (default: outputs.dir)");
        sub->add_option("--c-const", o.c_const, "Certificate constant C");
        sub->add_option("--epsilons", o.epsilons, "Comma-separated epsilon list for limit-check");
    };
    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const Options&);
    };
    const Sub subs[] = {
        {"simulate", "Run the integrator and write diagnostics", cmd_simulate},
        {"characteristics", "Track characteristics and check their identities", cmd_characteristics},
        {"certify", "Evaluate the wave-breaking certificate", cmd_certify},
        {"picard", "Run the Friedrichs-regularized Picard iteration", cmd_picard},
        {"limit-check", "Compare sine and mCH dynamics for small amplitudes", cmd_limit_check},
        {"identities", "Run the identity battery", cmd_identities},
    };
    std::vector<std::pair<CLI::App*, int (*)(const Options&)>> handlers;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        add_common(sub);
        handlers.emplace_back(sub, s.fn);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("usage_error", e.what());
        return kError;
    }
    for (auto* sub : app.get_subcommands()) {
        if (sub->get_option("--c-const")->count() > 0) o.c_given = true;
    }
    try {
        for (auto& [sub, fn] : handlers) {
            if (sub->parsed()) return fn(o);
        }
    } catch (const std::exception& e) {
        report_error(error_kind(e), e.what());
        return kError;
    }
    return kError;
}
