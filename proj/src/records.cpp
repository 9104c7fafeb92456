#include "smch/records.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "smch/errors.hpp"

namespace smch {

std::string format_number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void JsonLine::key(const std::string& k) {
    if (!body_.empty()) body_ += ',';
    body_ += nlohmann::json(k).dump();
    body_ += ':';
}

JsonLine& JsonLine::add(const std::string& k, double value) {
    key(k);
    body_ += format_number(value);
    return *this;
}

JsonLine& JsonLine::add(const std::string& k, int value) {
    key(k);
    body_ += std::to_string(value);
    return *this;
}

JsonLine& JsonLine::add(const std::string& k, std::uint64_t value) {
    key(k);
    body_ += std::to_string(value);
    return *this;
}

JsonLine& JsonLine::add(const std::string& k, bool value) {
    key(k);
    body_ += value ? "true" : "false";
    return *this;
}

JsonLine& JsonLine::add(const std::string& k, const std::string& value) {
    key(k);
    body_ += nlohmann::json(value).dump();
    return *this;
}

JsonLine& JsonLine::add(const std::string& k, const std::vector<double>& values) {
    key(k);
    body_ += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) body_ += ',';
        body_ += format_number(values[i]);
    }
    body_ += ']';
    return *this;
}

std::string to_ndjson(const DiagnosticsRecord& r) {
    return JsonLine{}
        .add("t", r.t)
        .add("h1", r.h1)
        .add("m_inf", r.m_inf)
        .add("m_l2", r.m_l2)
        .add("min_M", r.min_M)
        .add("blowup_integral", r.blowup_integral)
        .add("u_inf", r.u_inf)
        .add("ux_inf", r.ux_inf)
        .add("uxx_inf", r.uxx_inf)
        .str();
}

std::string to_ndjson(const BreakingCertificate& c) {
    return JsonLine{}
        .add("x0", c.x0)
        .add("mbar0", c.mbar0)
        .add("Mbar0", c.Mbar0)
        .add("C", c.C)
        .add("C1", c.C1)
        .add("xi", c.xi)
        .add("A_xi", c.A_xi)
        .add("h_xi", c.h_xi)
        .add("fires", c.fires)
        .add("predicted_window", std::vector<double>{c.predicted_window[0], c.predicted_window[1]})
        .str();
}

std::string to_ndjson(const PicardReport& r) {
    return JsonLine{}
        .add("iterate_norms", r.iterate_norms)
        .add("differences", r.differences)
        .add("rho", r.rho)
        .add("fit_points", r.fit_points)
        .add("existence_bound", r.existence_bound)
        .add("max_iterate_norm", r.max_iterate_norm)
        .add("solver_gap_l2", r.solver_gap_l2)
        .add("dt", r.dt)
        .str();
}

std::string to_ndjson(const IdentityResult& r) {
    return JsonLine{}
        .add("name", r.name)
        .add("value", r.value)
        .add("tolerance", r.tolerance)
        .add("passed", r.passed)
        .str();
}

namespace {

nlohmann::json parse_line(const std::string& line) {
    try {
        auto j = nlohmann::json::parse(line);
        if (!j.is_object()) throw FormatError("NDJSON line is not an object");
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed NDJSON line: ") + e.what());
    }
}

double number(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw FormatError(std::string("missing key '") + key + "'");
    if (it->is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!it->is_number()) throw FormatError(std::string("key '") + key + "' is not a number");
    return it->get<double>();
}

}  // namespace

DiagnosticsRecord diagnostics_from_ndjson(const std::string& line) {
    const auto j = parse_line(line);
    DiagnosticsRecord r;
    r.t = number(j, "t");
    r.h1 = number(j, "h1");
    r.m_inf = number(j, "m_inf");
    r.m_l2 = number(j, "m_l2");
    r.min_M = number(j, "min_M");
    r.blowup_integral = number(j, "blowup_integral");
    r.u_inf = number(j, "u_inf");
    r.ux_inf = number(j, "ux_inf");
    r.uxx_inf = number(j, "uxx_inf");
    return r;
}

BreakingCertificate certificate_from_ndjson(const std::string& line) {
    const auto j = parse_line(line);
    BreakingCertificate c;
    c.x0 = number(j, "x0");
    c.mbar0 = number(j, "mbar0");
    c.Mbar0 = number(j, "Mbar0");
    c.C = number(j, "C");
    c.C1 = number(j, "C1");
    c.xi = number(j, "xi");
    c.A_xi = number(j, "A_xi");
    c.h_xi = number(j, "h_xi");
    auto f = j.find("fires");
    if (f == j.end() || !f->is_boolean()) throw FormatError("missing boolean 'fires'");
    c.fires = f->get<bool>();
    auto w = j.find("predicted_window");
    if (w == j.end() || !w->is_array() || w->size() != 2) throw FormatError("bad 'predicted_window'");
    c.predicted_window = {(*w)[0].get<double>(), (*w)[1].get<double>()};
    return c;
}

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
    os << "t,h1,m_inf,min_M,blowup_integral\n";
    for (const auto& r : records) {
        os << format_number(r.t) << ',' << format_number(r.h1) << ',' << format_number(r.m_inf) << ','
           << format_number(r.min_M) << ',' << format_number(r.blowup_integral) << '\n';
    }
}

}  // namespace smch
