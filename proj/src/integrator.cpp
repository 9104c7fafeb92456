#include "smch/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "smch/errors.hpp"
#include "smch/spectral.hpp"

namespace smch {

void validate(const StepperConfig& cfg) {
    if (!(cfg.dt_init > 0.0) || !std::isfinite(cfg.dt_init)) throw ConfigError("stepper.dt_init must be positive");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw ConfigError("stepper.cfl must lie in (0, 1]");
    if (!std::isfinite(cfg.t_end) || cfg.t_end < 0.0) throw ConfigError("stepper.t_end must be finite and nonnegative");
    if (!(cfg.max_m_inf > 0.0)) throw ConfigError("stepper.max_m_inf must be positive");
    if (!(cfg.tol > 0.0)) throw ConfigError("stepper.tol must be positive");
    if (cfg.record_every == 0) throw ConfigError("stepper.record_every must be positive");
    if (!(cfg.seam_abort > 0.0)) throw ConfigError("stepper.seam_abort must be positive");
}

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::reached_t_end: return "reached_t_end";
        case RunStatus::blowup_detected: return "blowup_detected";
        case RunStatus::domain_contaminated: return "domain_contaminated";
        case RunStatus::step_budget_exhausted: return "step_budget_exhausted";
    }
    return "unknown";
}

SolutionState step_rk4(const SolutionState& state, double dt, const ModelParams& params) {
    if (dt < 0.0 || !std::isfinite(dt)) throw ConfigError("step_rk4 needs dt >= 0");
    if (dt == 0.0) return state;
    const Field& m = state.m;
    const Field k1 = m_rhs_from_m(m, params);
    const Field k2 = m_rhs_from_m(Field(m).axpy(0.5 * dt, k1), params);
    const Field k3 = m_rhs_from_m(Field(m).axpy(0.5 * dt, k2), params);
    const Field k4 = m_rhs_from_m(Field(m).axpy(dt, k3), params);
    Field next = m;
    const double w = dt / 6.0;
    for (std::size_t j = 0; j < next.size(); ++j) {
        next[j] += w * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    next.require_finite("RK4 update");
    return SolutionState::from_m(state.t + dt, std::move(next));
}

double seam_magnitude(const Field& m, double fraction) {
    const GridSpec& g = m.grid();
    double worst = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        if (std::abs(g.x(j)) >= fraction * g.half_length) worst = std::max(worst, std::abs(m[j]));
    }
    return worst;
}

namespace {

double max_velocity(const SolutionState& s) {
    const Field ux = derivative(s.u);
    double v = 0.0;
    for (std::size_t j = 0; j < ux.size(); ++j) {
        v = std::max(v, std::abs(std::sin(s.u[j] * s.u[j] - ux[j] * ux[j])));
    }
    return v;
}

double velocity_bound(const SolutionState& s, const ModelParams& params) {
    if (params.mode == ModelMode::sine) return max_velocity(s);
    const Field ux = derivative(s.u);
    double v = 0.0;
    for (std::size_t j = 0; j < ux.size(); ++j) {
        const double w = s.u[j] * s.u[j] - ux[j] * ux[j];
        v = std::max(v, std::abs(params.mode == ModelMode::mch ? w : w - w * w * w / 6.0));
    }
    return v;
}

}  // namespace

RunOutcome run(const SolutionState& state0, const StepperConfig& cfg, const ModelParams& params,
               const RunSinks& sinks) {
    validate(cfg);
    state0.m.require_finite("initial m");
    RunOutcome out;
    SolutionState state = state0;
    const double h = state.grid().spacing();
    const double dt_floor = 1e-12 * cfg.dt_init;
    double blowup_integral = 0.0;
    double m_inf = state.m.max_abs();
    double dt = cfg.dt_init;
    out.min_dt = cfg.dt_init;
    bool contamination_warned = false;

    auto emit = [&] {
        out.history.push_back(make_record(state, blowup_integral));
        if (sinks.on_record) sinks.on_record(out.history.back());
    };
    auto check_contamination = [&] {
        if (!contamination_warned && seam_magnitude(state.m, 0.5) > 1e-12) {
            contamination_warned = true;
            out.warnings.push_back("domain-contamination: |m| exceeds 1e-12 beyond |x| = L/2 at t = " +
                                   std::to_string(state.t));
        }
        return seam_magnitude(state.m, 0.9) > cfg.seam_abort;
    };

    emit();
    if (sinks.on_state) sinks.on_state(state);
    if (check_contamination()) {
        out.status = RunStatus::domain_contaminated;
        out.final_state = state;
        return out;
    }

    const double t_tol = 1e-10 * cfg.dt_init;
    bool recorded_last = true;
    RunStatus status = RunStatus::reached_t_end;
    while (cfg.t_end - state.t > t_tol) {
        if (out.steps >= cfg.max_steps) {
            status = RunStatus::step_budget_exhausted;
            break;
        }
        const double cfl_dt = cfg.cfl * h / std::max(velocity_bound(state, params), 1e-12);
        double trial = std::min(cfg.fixed_dt ? cfg.dt_init : dt, cfl_dt);
        bool underflow = false;
        SolutionState next;
        for (;;) {
            bool last = false;
            double step = trial;
            if (state.t + step >= cfg.t_end - t_tol) {
                step = cfg.t_end - state.t;
                last = true;
            }
            if (step < dt_floor) {
                underflow = true;
                break;
            }
            try {
                if (cfg.fixed_dt) {
                    next = step_rk4(state, step, params);
                    dt = cfg.dt_init;
                } else {
                    const SolutionState full = step_rk4(state, step, params);
                    const SolutionState half = step_rk4(step_rk4(state, 0.5 * step, params), 0.5 * step, params);
                    const double err = (full.m - half.m).max_abs() /
                                       (cfg.tol * std::max(half.m.max_abs(), 1.0));
                    const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 2.0;
                    if (err > 1.0) {
                        ++out.rejected_steps;
                        trial = step * std::max(0.2, std::min(factor, 0.9));
                        continue;
                    }
                    next = half;
                    dt = step * std::min(2.0, std::max(0.2, factor));
                }
            } catch (const NumericError&) {
                ++out.rejected_steps;
                trial = 0.25 * step;
                continue;
            }
            if (last) next.t = cfg.t_end;
            out.last_dt = step;
            out.min_dt = std::min(out.min_dt, step);
            break;
        }
        if (underflow) {
            status = RunStatus::blowup_detected;
            out.blowup_reason = "dt_underflow";
            break;
        }
        const double dt_taken = next.t - state.t;
        const double m_inf_next = next.m.max_abs();
        blowup_integral += 0.5 * dt_taken * (m_inf * m_inf + m_inf_next * m_inf_next);
        m_inf = m_inf_next;
        state = std::move(next);
        ++out.steps;
        if (sinks.on_state) sinks.on_state(state);

        recorded_last = out.steps % cfg.record_every == 0;
        if (recorded_last) emit();
        if (m_inf >= cfg.max_m_inf) {
            status = RunStatus::blowup_detected;
            out.blowup_reason = "m_inf_threshold";
            break;
        }
        if (check_contamination()) {
            status = RunStatus::domain_contaminated;
            break;
        }
    }
    if (!recorded_last) emit();
    out.status = status;
    out.final_state = std::move(state);
    return out;
}

}  // namespace smch
