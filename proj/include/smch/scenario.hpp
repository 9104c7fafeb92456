#pragma once

#include <string>
#include <utility>
#include <vector>

#include "smch/integrator.hpp"
#include "smch/picard.hpp"

namespace smch {

enum class InitialKind { gaussian_bump, sech_bump, shifted_pair, single_mode, from_file };
std::string to_string(InitialKind kind);
InitialKind parse_initial_kind(const std::string& name);

/// gaussian_bump: A exp(-(x-c)^2/w^2) + floor
/// sech_bump:     A sech((x-c)/w) + floor
/// shifted_pair:  A exp(-(x-c0)^2/w^2) + A2 exp(-(x-c1)^2/w2^2) + floor
/// single_mode:   A cos(pi mode x / L) + floor
/// from_file:     m read from a snapshot on the same grid
struct InitialDataFamily {
    InitialKind kind = InitialKind::gaussian_bump;
    double amplitude = 1.0;
    double width = 1.0;
    double center = 0.0;
    std::vector<double> centers{-1.0, 1.0};
    double amplitude2 = 1.0;
    double width2 = 1.0;
    double floor = 0.0;
    int mode = 1;
    std::string path;

    bool operator==(const InitialDataFamily&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    /// Characteristic history is stored every this many accepted steps.
    std::uint64_t history_every = 1;
    bool write_snapshot = true;
    bool write_csv = true;
    /// Picard: dump the final iterate as snapshots.
    bool dump_iterates = false;

    bool operator==(const OutputConfig&) const = default;
};

struct CharacteristicsConfig {
    double fd_spacing = 1e-3;
    int substeps = 1;
    /// Used when no explicit seeds are given: evenly spaced seeds over the support.
    int auto_seeds = 9;

    bool operator==(const CharacteristicsConfig&) const = default;
};

struct CertificateConfig {
    bool enabled = true;
    double C = 1.0;

    bool operator==(const CertificateConfig&) const = default;
};

struct IdentitiesConfig {
    /// Short fixed-step run feeding the characteristic identities.
    double t_end = 0.1;
    double dt = 1e-3;
    /// Gaussian added to u after it is derived from m (negative control).
    double u_perturbation = 0.0;

    bool operator==(const IdentitiesConfig&) const = default;
};

struct LimitCheckConfig {
    double t_end = 0.5;
    double dt = 1e-3;
    std::vector<double> epsilons{0.2, 0.1, 0.05};

    bool operator==(const LimitCheckConfig&) const = default;
};

struct Scenario {
    std::size_t n = 1024;
    double L = 20.0;
    InitialDataFamily initial_data;
    ModelParams model;
    StepperConfig stepper;
    OutputConfig outputs;
    std::vector<double> seeds;
    CharacteristicsConfig characteristics;
    CertificateConfig certificate;
    PicardConfig picard;
    IdentitiesConfig identities;
    LimitCheckConfig limit_check;

    GridSpec grid() const { return make_grid(n, L); }
    bool operator==(const Scenario&) const = default;
};

/// Parses and validates a JSON document. Every failure is a ConfigError whose
/// message starts with the path of the offending key.
Scenario parse_scenario(const std::string& text);
/// As parse_scenario, after applying dotted-path KEY=VALUE overrides. VALUE is read
/// as JSON when it parses, otherwise as a string.
Scenario parse_scenario(const std::string& text, const std::vector<std::pair<std::string, std::string>>& overrides);
Scenario load_scenario(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Complete document with every field written out.
std::string serialize_scenario(const Scenario& s);

/// Throws ConfigError on invalid settings.
void validate(const Scenario& s);

/// Samples the family. Appends a domain-contamination warning when the profile
/// exceeds 1e-12 (after removing the floor) beyond |x| > L/2.
Field build_initial_m(const InitialDataFamily& family, const GridSpec& grid,
                      std::vector<std::string>* warnings = nullptr);

/// Seeds from the scenario, or evenly spaced seeds over the region where m0 exceeds
/// 1e-3 of its peak.
std::vector<double> resolve_seeds(const Scenario& s, const Field& m0);

}  // namespace smch
