#pragma once

#include <functional>
#include <vector>

#include "smch/characteristics.hpp"
#include "smch/records.hpp"
#include "smch/scenario.hpp"

namespace smch {

/// Sup-norm discrepancies of the characteristic identities over a bundle.
struct CharacteristicChecks {
    /// max |qx_formula - qx_fd| / qx_formula
    double qx_rel = 0.0;
    /// max |mbar_formula - mbar_field| / max |mbar_field|
    double mbar_rel = 0.0;
    /// max |qx_formula mbar_formula - m0(x0)| / max |m0(x0)|
    double product_rel = 0.0;
    /// Samples where sign(mbar) differs from sign(m0(x0)).
    std::size_t sign_violations = 0;
    /// max ODE residual / max |mbar Mbar|
    double ode_rel = 0.0;
    /// Output times at which q fails to increase across the sorted seeds.
    std::size_t monotone_violations = 0;
};

CharacteristicChecks check_characteristics(const CharacteristicBundle& bundle);

/// Fixed-step run storing every step in a FieldHistory. The step is t_end / round(t_end / dt).
FieldHistory fixed_step_history(const SolutionState& state0, double t_end, double dt, const ModelParams& params,
                                const std::function<void(const SolutionState&)>& on_state = {});

/// Full identity battery on the scenario's initial data. The order of the results is stable.
std::vector<IdentityResult> run_identities(const Scenario& s);

struct LimitCheckRow {
    double epsilon = 0.0;
    /// sup_t |m_sine - m_mch|_inf
    double sup_diff = 0.0;
    /// sup_t |m_sine - m_cubic|_inf with the two-term sine series.
    double cubic_diff = 0.0;
};

struct LimitCheckResult {
    std::vector<LimitCheckRow> rows;
    /// Least-squares slope of log sup_diff against log epsilon over rows with both positive.
    double fitted_order = 0.0;
};

/// The scenario's initial family with amplitudes rescaled so the primary amplitude is epsilon.
InitialDataFamily scaled_family(const InitialDataFamily& f, double epsilon);

LimitCheckResult run_limit_check(const Scenario& s, const std::vector<double>& epsilons);

}  // namespace smch
