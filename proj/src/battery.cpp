#include "smch/battery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smch/analysis.hpp"
#include "smch/errors.hpp"
#include "smch/integrator.hpp"
#include "smch/spectral.hpp"

namespace smch {

CharacteristicChecks check_characteristics(const CharacteristicBundle& b) {
    CharacteristicChecks c;
    const auto qx_cf = qx_closed_form(b);
    const auto mbar_cf = mbar_closed_form(b, b.m0_at_seeds);
    const std::size_t ns = b.seeds.size();
    const std::size_t nt = b.times.size();

    double mbar_scale = 0.0, m0_scale = 0.0;
    for (std::size_t k = 0; k < ns; ++k) {
        m0_scale = std::max(m0_scale, std::abs(b.m0_at_seeds[k]));
        for (double v : b.mbar[k]) mbar_scale = std::max(mbar_scale, std::abs(v));
    }
    double mbar_err = 0.0, prod_err = 0.0;
    for (std::size_t k = 0; k < ns; ++k) {
        const double s0 = b.m0_at_seeds[k];
        for (std::size_t i = 0; i < nt; ++i) {
            if (b.fd_spacing > 0.0) c.qx_rel = std::max(c.qx_rel, std::abs(qx_cf[k][i] - b.qx[k][i]) / qx_cf[k][i]);
            mbar_err = std::max(mbar_err, std::abs(mbar_cf[k][i] - b.mbar[k][i]));
            prod_err = std::max(prod_err, std::abs(qx_cf[k][i] * mbar_cf[k][i] - s0));
            const double v = b.mbar[k][i];
            if ((s0 > 0.0 && !(v > 0.0)) || (s0 < 0.0 && !(v < 0.0))) ++c.sign_violations;
        }
    }
    c.mbar_rel = mbar_scale > 0.0 ? mbar_err / mbar_scale : mbar_err;
    c.product_rel = m0_scale > 0.0 ? prod_err / m0_scale : prod_err;

    if (nt >= 3) {
        double res = 0.0, src = 0.0;
        for (const auto& r : mbar_ode_residual(b)) {
            res = std::max(res, r.sup_residual);
            src = std::max(src, r.sup_source);
        }
        c.ode_rel = src > 0.0 ? res / src : res;
    }

    std::vector<std::size_t> order(ns);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto z) { return b.seeds[a] < b.seeds[z]; });
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t k = 1; k < ns; ++k) {
            if (b.seeds[order[k]] > b.seeds[order[k - 1]] && !(b.q[order[k]][i] > b.q[order[k - 1]][i])) {
                ++c.monotone_violations;
                break;
            }
        }
    }
    return c;
}

FieldHistory fixed_step_history(const SolutionState& state0, double t_end, double dt, const ModelParams& params,
                                const std::function<void(const SolutionState&)>& on_state) {
    if (!(dt > 0.0) || !(t_end > 0.0)) throw ConfigError("fixed_step_history needs positive t_end and dt");
    const auto steps = std::max<long>(1, std::lround(t_end / dt));
    const double h = t_end / static_cast<double>(steps);
    FieldHistory hist(state0.grid());
    SolutionState s = state0;
    hist.push_state(s);
    for (long i = 0; i < steps; ++i) {
        s = step_rk4(s, h, params);
        s.t = t_end * static_cast<double>(i + 1) / static_cast<double>(steps);
        hist.push_state(s);
        if (on_state) on_state(s);
    }
    return hist;
}

namespace {

IdentityResult result(std::string name, double value, double tol) {
    return IdentityResult{std::move(name), value, tol, std::isfinite(value) && value <= tol};
}

double rel(const Field& diff, double scale) { return diff.max_abs() / std::max(scale, 1e-300); }

}  // namespace

std::vector<IdentityResult> run_identities(const Scenario& s) {
    const GridSpec grid = s.grid();
    const Field m0 = build_initial_m(s.initial_data, grid);
    SolutionState state = SolutionState::from_m(0.0, m0);
    if (s.identities.u_perturbation != 0.0) {
        state.u += Field::sample(grid, [&](double x) { return s.identities.u_perturbation * std::exp(-x * x); });
    }
    std::vector<IdentityResult> out;
    out.push_back(result("helmholtz_link", helmholtz_link_residual(state), 1e-10));

    const Field& f = state.m;
    const double fscale = std::max(1.0, f.max_abs());
    const Field pf = convolve_p(f);
    const Field pp = convolve_p_plus(f);
    const Field pm = convolve_p_minus(f);
    out.push_back(result("p_split", (pp + pm - pf).max_abs() / fscale, 1e-9));
    out.push_back(result("p_x_split", (pm - pp - convolve_p_x(f)).max_abs() / fscale, 1e-9));
    out.push_back(result("p_xx", (second_derivative(pf) - (pf - f)).max_abs() / fscale, 1e-9));

    const Field rhs = m_rhs(state, s.model);
    out.push_back(result("conservative_transport",
                         (rhs - m_rhs_transport(state, s.model)).max_abs() / std::max(1.0, rhs.max_abs()), 1e-8));
    const Field ut = helmholtz_solve(rhs);
    const Field ut_nonlocal = u_rhs_nonlocal(state, s.model);
    out.push_back(result("u_form", rel(ut - ut_nonlocal, ut.max_abs()), 1e-7));
    const Field uxt = derivative(ut);
    out.push_back(result("ux_form", rel(uxt - ux_rhs_nonlocal(state, s.model), uxt.max_abs()), 1e-7));

    const SolutionState clean = SolutionState::from_m(0.0, m0);
    const double h1_0 = h1(clean);
    double drift = 0.0;
    const FieldHistory hist = fixed_step_history(clean, s.identities.t_end, s.identities.dt, s.model,
                                                 [&](const SolutionState& st) {
                                                     drift = std::max(drift, std::abs(h1(st) - h1_0));
                                                 });
    out.push_back(result("h1_drift", std::abs(h1_0) > 0.0 ? drift / std::abs(h1_0) : drift, 1e-8));

    AdvectOptions opt;
    opt.fd_spacing = s.characteristics.fd_spacing;
    opt.substeps = s.characteristics.substeps;
    const auto bundle = advect(resolve_seeds(s, m0), hist, opt);
    const auto c = check_characteristics(bundle);
    if (opt.fd_spacing > 0.0) out.push_back(result("qx_closed_form", c.qx_rel, 1e-4));
    out.push_back(result("mbar_closed_form", c.mbar_rel, 1e-5));
    out.push_back(result("reciprocity", c.product_rel, 1e-6));
    out.push_back(result("sign_preservation", static_cast<double>(c.sign_violations), 0.0));
    out.push_back(result("mbar_ode", c.ode_rel, 1e-4));
    out.push_back(result("flow_monotone", static_cast<double>(c.monotone_violations), 0.0));
    return out;
}

InitialDataFamily scaled_family(const InitialDataFamily& f, double epsilon) {
    InitialDataFamily g = f;
    if (f.amplitude != 0.0) {
        g.amplitude2 = f.amplitude2 * epsilon / f.amplitude;
        g.floor = f.floor * epsilon / f.amplitude;
    }
    g.amplitude = epsilon;
    return g;
}

LimitCheckResult run_limit_check(const Scenario& s, const std::vector<double>& epsilons) {
    for (double e : epsilons) {
        if (!(e >= 0.0 && e <= 0.5)) throw ConfigError("limit-check epsilons must lie in [0, 0.5]");
    }
    const GridSpec grid = s.grid();
    const auto steps = std::max<long>(1, std::lround(s.limit_check.t_end / s.limit_check.dt));
    const double h = s.limit_check.t_end / static_cast<double>(steps);
    ModelParams sine = s.model, mch = s.model, cubic = s.model;
    sine.mode = ModelMode::sine;
    mch.mode = ModelMode::mch;
    cubic.mode = ModelMode::mch_cubic;

    LimitCheckResult res;
    for (double e : epsilons) {
        LimitCheckRow row;
        row.epsilon = e;
        const Field m0 = build_initial_m(scaled_family(s.initial_data, e), grid);
        SolutionState a = SolutionState::from_m(0.0, m0), b = a, c = a;
        for (long i = 0; i < steps; ++i) {
            a = step_rk4(a, h, sine);
            b = step_rk4(b, h, mch);
            c = step_rk4(c, h, cubic);
            row.sup_diff = std::max(row.sup_diff, (a.m - b.m).max_abs());
            row.cubic_diff = std::max(row.cubic_diff, (a.m - c.m).max_abs());
        }
        res.rows.push_back(row);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& r : res.rows) {
        if (r.epsilon > 0.0 && r.sup_diff > 0.0) {
            const double x = std::log(r.epsilon), y = std::log(r.sup_diff);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
    }
    if (n >= 2) res.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return res;
}

}  // namespace smch
