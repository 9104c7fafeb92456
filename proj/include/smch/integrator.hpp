#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "smch/analysis.hpp"
#include "smch/dynamics.hpp"

namespace smch {

struct StepperConfig {
    double dt_init = 1e-2;
    /// dt <= cfl * h / max(|V|_inf, 1e-12) on every step.
    double cfl = 0.3;
    double t_end = 1.0;
    /// |m|_inf at or above this value ends the run as blowup_detected.
    double max_m_inf = 1e4;
    std::uint64_t max_steps = 10'000'000;
    /// Fixed mode steps with min(dt_init, CFL bound); adaptive mode controls the
    /// step-doubling error of m.
    bool fixed_dt = false;
    /// Step-doubling tolerance relative to max(|m|_inf, 1).
    double tol = 1e-9;
    /// Emit a DiagnosticsRecord every this many accepted steps (plus first and last).
    std::uint64_t record_every = 10;
    /// Stop as domain_contaminated once |m| within 0.1 L of the seam exceeds this.
    double seam_abort = 1e-6;

    bool operator==(const StepperConfig&) const = default;
};

/// Throws ConfigError on invalid settings.
void validate(const StepperConfig& cfg);

enum class RunStatus { reached_t_end, blowup_detected, domain_contaminated, step_budget_exhausted };
std::string to_string(RunStatus status);

struct RunOutcome {
    RunStatus status = RunStatus::reached_t_end;
    SolutionState final_state;
    std::vector<DiagnosticsRecord> history;
    std::uint64_t steps = 0;
    std::uint64_t rejected_steps = 0;
    double last_dt = 0.0;
    double min_dt = 0.0;
    /// Why blow-up was flagged: "m_inf_threshold" or "dt_underflow".
    std::string blowup_reason;
    std::vector<std::string> warnings;
};

struct RunSinks {
    /// Every emitted diagnostics record, in order.
    std::function<void(const DiagnosticsRecord&)> on_record;
    /// The initial state and every accepted state.
    std::function<void(const SolutionState&)> on_state;
};

/// One classical RK4 step of the conservative m-equation; u is refreshed from m.
/// Throws NumericError if the result is not finite.
SolutionState step_rk4(const SolutionState& state, double dt, const ModelParams& params);

RunOutcome run(const SolutionState& state0, const StepperConfig& cfg, const ModelParams& params,
               const RunSinks& sinks = {});

/// Largest |m| on the part of the grid with |x| >= fraction * L.
double seam_magnitude(const Field& m, double fraction);

}  // namespace smch
