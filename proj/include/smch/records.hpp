#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "smch/analysis.hpp"
#include "smch/picard.hpp"

namespace smch {

/// One NDJSON object with keys in insertion order. Numbers are written with 17
/// significant digits; non-finite numbers become null.
class JsonLine {
public:
    JsonLine& add(const std::string& key, double value);
    JsonLine& add(const std::string& key, int value);
    JsonLine& add(const std::string& key, std::uint64_t value);
    JsonLine& add(const std::string& key, bool value);
    JsonLine& add(const std::string& key, const std::string& value);
    JsonLine& add(const std::string& key, const char* value) { return add(key, std::string(value)); }
    JsonLine& add(const std::string& key, const std::vector<double>& values);
    std::string str() const { return "{" + body_ + "}"; }

private:
    void key(const std::string& k);
    std::string body_;
};

/// %.17g, or "null" for NaN/Inf.
std::string format_number(double v);

struct IdentityResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

std::string to_ndjson(const DiagnosticsRecord& r);
std::string to_ndjson(const BreakingCertificate& c);
std::string to_ndjson(const PicardReport& r);
std::string to_ndjson(const IdentityResult& r);

/// Inverse of to_ndjson for diagnostics lines. Throws FormatError on malformed input.
DiagnosticsRecord diagnostics_from_ndjson(const std::string& line);
BreakingCertificate certificate_from_ndjson(const std::string& line);

/// Header t,h1,m_inf,min_M,blowup_integral followed by one row per record.
void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);

}  // namespace smch
