#include "smch/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "smch/errors.hpp"
#include "smch/snapshot.hpp"

namespace smch {

using nlohmann::json;

std::string to_string(InitialKind kind) {
    switch (kind) {
        case InitialKind::gaussian_bump: return "gaussian_bump";
        case InitialKind::sech_bump: return "sech_bump";
        case InitialKind::shifted_pair: return "shifted_pair";
        case InitialKind::single_mode: return "single_mode";
        case InitialKind::from_file: return "from_file";
    }
    return "unknown";
}

InitialKind parse_initial_kind(const std::string& name) {
    for (auto k : {InitialKind::gaussian_bump, InitialKind::sech_bump, InitialKind::shifted_pair,
                   InitialKind::single_mode, InitialKind::from_file}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown initial data kind '" + name + "'");
}

namespace {

/// Reads one JSON object, remembering which keys were consumed.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    [[noreturn]] static void fail(const std::string& where, const std::string& what) {
        throw ConfigError(where + ": " + what);
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) fail(at(key), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) fail(at(key), "must be finite");
        }
    }

    /// Accepts the string "inf" for infinite Besov indices.
    void index(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (v->is_string() && v->get<std::string>() == "inf") {
                out = INFINITY;
            } else if (v->is_number()) {
                out = v->get<double>();
            } else {
                fail(at(key), "expected a number or \"inf\"");
            }
        }
    }

    template <typename I>
    void integer(const std::string& key, I& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) fail(at(key), "expected an integer");
            if constexpr (std::is_unsigned_v<I>) {
                if (v->is_number_unsigned() || v->get<long long>() >= 0) {
                    out = v->get<I>();
                    return;
                }
                fail(at(key), "must be non-negative");
            } else {
                out = v->get<I>();
            }
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) fail(at(key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) fail(at(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void numbers(const std::string& key, std::vector<double>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array()) fail(at(key), "expected an array of numbers");
            out.clear();
            for (std::size_t i = 0; i < v->size(); ++i) {
                const json& e = (*v)[i];
                if (!e.is_number()) fail(at(key) + "[" + std::to_string(i) + "]", "expected a number");
                out.push_back(e.get<double>());
                if (!std::isfinite(out.back())) fail(at(key) + "[" + std::to_string(i) + "]", "must be finite");
            }
        }
    }

    template <typename F>
    void object(const std::string& key, F&& body) {
        if (const json* v = find(key)) {
            Reader sub(*v, at(key));
            body(sub);
            sub.finish();
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) fail(at(it.key()), "unknown key");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void check(bool ok, const std::string& where, const std::string& what) {
    if (!ok) Reader::fail(where, what);
}

Scenario from_json(const json& doc) {
    Scenario s;
    Reader root(doc, "");
    root.object("grid", [&](Reader& r) {
        r.integer("n", s.n);
        r.number("L", s.L);
    });
    root.object("initial_data", [&](Reader& r) {
        auto& f = s.initial_data;
        std::string kind = to_string(f.kind);
        r.string("kind", kind);
        try {
            f.kind = parse_initial_kind(kind);
        } catch (const ConfigError& e) {
            Reader::fail(r.at("kind"), e.what());
        }
        r.number("amplitude", f.amplitude);
        r.number("width", f.width);
        r.number("center", f.center);
        r.numbers("centers", f.centers);
        r.number("amplitude2", f.amplitude2);
        r.number("width2", f.width2);
        r.number("floor", f.floor);
        r.integer("mode", f.mode);
        r.string("path", f.path);
    });
    root.object("model", [&](Reader& r) {
        std::string mode = to_string(s.model.mode);
        r.string("mode", mode);
        try {
            s.model.mode = parse_model_mode(mode);
        } catch (const ConfigError& e) {
            Reader::fail(r.at("mode"), e.what());
        }
        r.number("kappa", s.model.kappa);
    });
    root.object("stepper", [&](Reader& r) {
        auto& c = s.stepper;
        r.number("dt_init", c.dt_init);
        r.number("cfl", c.cfl);
        r.number("t_end", c.t_end);
        r.number("max_m_inf", c.max_m_inf);
        r.integer("max_steps", c.max_steps);
        r.boolean("fixed_dt", c.fixed_dt);
        r.number("tol", c.tol);
        r.integer("record_every", c.record_every);
        r.number("seam_abort", c.seam_abort);
    });
    root.object("outputs", [&](Reader& r) {
        auto& o = s.outputs;
        r.string("dir", o.dir);
        r.integer("history_every", o.history_every);
        r.boolean("write_snapshot", o.write_snapshot);
        r.boolean("write_csv", o.write_csv);
        r.boolean("dump_iterates", o.dump_iterates);
    });
    root.numbers("seeds", s.seeds);
    root.object("characteristics", [&](Reader& r) {
        r.number("fd_spacing", s.characteristics.fd_spacing);
        r.integer("substeps", s.characteristics.substeps);
        r.integer("auto_seeds", s.characteristics.auto_seeds);
    });
    root.object("certificate", [&](Reader& r) {
        r.boolean("enabled", s.certificate.enabled);
        r.number("C", s.certificate.C);
    });
    root.object("picard", [&](Reader& r) {
        auto& p = s.picard;
        r.integer("iterations", p.iterations);
        r.number("T", p.T);
        r.number("s", p.s);
        r.index("p", p.p);
        r.index("r", p.r);
        r.number("dt", p.dt);
        r.number("C_user", p.C_user);
        r.number("delta", p.delta);
        r.number("max_m_inf", p.max_m_inf);
        r.boolean("compare_with_solver", p.compare_with_solver);
    });
    root.object("identities", [&](Reader& r) {
        r.number("t_end", s.identities.t_end);
        r.number("dt", s.identities.dt);
        r.number("u_perturbation", s.identities.u_perturbation);
    });
    root.object("limit_check", [&](Reader& r) {
        r.number("t_end", s.limit_check.t_end);
        r.number("dt", s.limit_check.dt);
        r.numbers("epsilons", s.limit_check.epsilons);
    });
    root.finish();
    return s;
}

json index_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

json to_json(const Scenario& s) {
    const auto& f = s.initial_data;
    json j;
    j["grid"] = {{"n", s.n}, {"L", s.L}};
    j["initial_data"] = {{"kind", to_string(f.kind)}, {"amplitude", f.amplitude}, {"width", f.width},
                         {"center", f.center},        {"centers", f.centers},     {"amplitude2", f.amplitude2},
                         {"width2", f.width2},        {"floor", f.floor},         {"mode", f.mode},
                         {"path", f.path}};
    j["model"] = {{"mode", to_string(s.model.mode)}, {"kappa", s.model.kappa}};
    const auto& c = s.stepper;
    j["stepper"] = {{"dt_init", c.dt_init},     {"cfl", c.cfl},   {"t_end", c.t_end},
                    {"max_m_inf", c.max_m_inf}, {"max_steps", c.max_steps}, {"fixed_dt", c.fixed_dt},
                    {"tol", c.tol},             {"record_every", c.record_every}, {"seam_abort", c.seam_abort}};
    const auto& o = s.outputs;
    j["outputs"] = {{"dir", o.dir},
                    {"history_every", o.history_every},
                    {"write_snapshot", o.write_snapshot},
                    {"write_csv", o.write_csv},
                    {"dump_iterates", o.dump_iterates}};
    j["seeds"] = s.seeds;
    j["characteristics"] = {{"fd_spacing", s.characteristics.fd_spacing},
                            {"substeps", s.characteristics.substeps},
                            {"auto_seeds", s.characteristics.auto_seeds}};
    j["certificate"] = {{"enabled", s.certificate.enabled}, {"C", s.certificate.C}};
    const auto& p = s.picard;
    j["picard"] = {{"iterations", p.iterations}, {"T", p.T},
                   {"s", p.s},                   {"p", index_json(p.p)},
                   {"r", index_json(p.r)},       {"dt", p.dt},
                   {"C_user", p.C_user},         {"delta", p.delta},
                   {"max_m_inf", p.max_m_inf},   {"compare_with_solver", p.compare_with_solver}};
    j["identities"] = {{"t_end", s.identities.t_end},
                       {"dt", s.identities.dt},
                       {"u_perturbation", s.identities.u_perturbation}};
    j["limit_check"] = {{"t_end", s.limit_check.t_end},
                        {"dt", s.limit_check.dt},
                        {"epsilons", s.limit_check.epsilons}};
    return j;
}

void apply_override(json& doc, const std::string& key, const std::string& value) {
    if (key.empty()) throw ConfigError("--set: empty key");
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError(key + ": empty path component");
        if (!node->is_object()) throw ConfigError(key + ": '" + part + "' is not inside an object");
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        if (!node->contains(part)) (*node)[part] = json::object();
        node = &(*node)[part];
        start = dot + 1;
    }
}

}  // namespace

void validate(const Scenario& s) {
    try {
        make_grid(s.n, s.L);
    } catch (const ConfigError& e) {
        Reader::fail("grid", e.what());
    }
    const auto& f = s.initial_data;
    check(f.width > 0.0, "initial_data.width", "must be positive");
    check(f.width2 > 0.0, "initial_data.width2", "must be positive");
    if (f.kind == InitialKind::shifted_pair) {
        check(f.centers.size() == 2, "initial_data.centers", "shifted_pair needs exactly two centers");
    }
    if (f.kind == InitialKind::single_mode) {
        check(f.mode >= 0 && static_cast<std::size_t>(f.mode) < s.n / 2, "initial_data.mode",
              "must lie in [0, n/2)");
    }
    if (f.kind == InitialKind::from_file) check(!f.path.empty(), "initial_data.path", "required for from_file");
    check(std::isfinite(s.model.kappa), "model.kappa", "must be finite");
    try {
        validate(s.stepper);
    } catch (const ConfigError& e) {
        Reader::fail("stepper", e.what());
    }
    check(!s.outputs.dir.empty(), "outputs.dir", "must not be empty");
    check(s.outputs.history_every > 0, "outputs.history_every", "must be positive");
    check(s.characteristics.fd_spacing >= 0.0, "characteristics.fd_spacing", "must be non-negative");
    check(s.characteristics.substeps >= 1, "characteristics.substeps", "must be >= 1");
    check(s.characteristics.auto_seeds >= 1, "characteristics.auto_seeds", "must be >= 1");
    for (double x : s.seeds) check(std::abs(x) <= s.L / 2, "seeds", "seeds must lie in [-L/2, L/2]");
    check(s.certificate.C > 0.0, "certificate.C", "must be positive");
    try {
        validate(s.picard);
    } catch (const ConfigError& e) {
        Reader::fail("picard", e.what());
    }
    check(s.picard.delta > 0.0 && s.picard.delta < 1.0 / 6.0, "picard.delta", "must lie in (0, 1/6)");
    check(s.identities.t_end > 0.0, "identities.t_end", "must be positive");
    check(s.identities.dt > 0.0 && s.identities.dt <= s.identities.t_end, "identities.dt", "must lie in (0, t_end]");
    check(s.limit_check.t_end > 0.0, "limit_check.t_end", "must be positive");
    check(s.limit_check.dt > 0.0 && s.limit_check.dt <= s.limit_check.t_end, "limit_check.dt",
          "must lie in (0, t_end]");
    for (double e : s.limit_check.epsilons) {
        check(e >= 0.0 && e <= 0.5, "limit_check.epsilons", "values must lie in [0, 0.5]");
    }
}

Scenario parse_scenario(const std::string& text, const std::vector<std::pair<std::string, std::string>>& overrides) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("<document>: malformed JSON: ") + e.what());
    }
    Scenario s;
    try {
        for (const auto& [k, v] : overrides) apply_override(doc, k, v);
        s = from_json(doc);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("<document>: ") + e.what());
    }
    validate(s);
    return s;
}

Scenario parse_scenario(const std::string& text) { return parse_scenario(text, {}); }

Scenario load_scenario(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read scenario file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_scenario(ss.str(), overrides);
}

std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2); }

Field build_initial_m(const InitialDataFamily& f, const GridSpec& grid, std::vector<std::string>* warnings) {
    Field m;
    switch (f.kind) {
        case InitialKind::gaussian_bump:
            m = Field::sample(grid, [&](double x) {
                const double z = (x - f.center) / f.width;
                return f.amplitude * std::exp(-z * z);
            });
            break;
        case InitialKind::sech_bump:
            m = Field::sample(grid, [&](double x) { return f.amplitude / std::cosh((x - f.center) / f.width); });
            break;
        case InitialKind::shifted_pair:
            if (f.centers.size() != 2) throw ConfigError("initial_data.centers: shifted_pair needs exactly two centers");
            m = Field::sample(grid, [&](double x) {
                const double z0 = (x - f.centers[0]) / f.width;
                const double z1 = (x - f.centers[1]) / f.width2;
                return f.amplitude * std::exp(-z0 * z0) + f.amplitude2 * std::exp(-z1 * z1);
            });
            break;
        case InitialKind::single_mode:
            m = Field::sample(grid, [&](double x) {
                return f.amplitude * std::cos(M_PI * f.mode * (x + grid.half_length) / grid.half_length);
            });
            break;
        case InitialKind::from_file: {
            const SolutionState st = load_snapshot(f.path);
            if (!(st.grid() == grid)) throw ConfigError("initial_data.path: snapshot grid differs from scenario grid");
            m = st.m;
            break;
        }
    }
    if (warnings) {
        double outside = 0.0;
        for (std::size_t j = 0; j < grid.n; ++j) {
            if (std::abs(grid.x(j)) > grid.half_length / 2) outside = std::max(outside, std::abs(m[j]));
        }
        if (outside > 1e-12) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "domain-contamination: initial |m| reaches %.3g beyond |x| > L/2", outside);
            warnings->push_back(buf);
        }
    }
    if (f.floor != 0.0) {
        for (auto& v : m.values()) v += f.floor;
    }
    return m;
}

std::vector<double> resolve_seeds(const Scenario& s, const Field& m0) {
    if (!s.seeds.empty()) return s.seeds;
    const auto& g = m0.grid();
    const double peak = m0.max_abs();
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        if (std::abs(x) > g.half_length / 4) continue;
        if (peak > 0.0 && std::abs(m0[j]) > 1e-3 * peak) {
            if (!any) lo = x;
            hi = x;
            any = true;
        }
    }
    if (!any) {
        lo = -g.half_length / 8;
        hi = g.half_length / 8;
    }
    const int k = s.characteristics.auto_seeds;
    std::vector<double> seeds;
    for (int i = 0; i < k; ++i) seeds.push_back(k == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (k - 1));
    return seeds;
}

}  // namespace smch
