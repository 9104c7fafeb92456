#include "smch/dynamics.hpp"

#include <cmath>

#include "smch/errors.hpp"
#include "smch/spectral.hpp"

namespace smch {

namespace {

using cplx = std::complex<double>;

double nonlinearity(ModelMode mode, double w) {
    switch (mode) {
        case ModelMode::sine: return std::sin(w);
        case ModelMode::mch: return w;
        case ModelMode::mch_cubic: return w - w * w * w / 6.0;
    }
    return 0.0;
}

double nonlinearity_slope(ModelMode mode, double w) {
    switch (mode) {
        case ModelMode::sine: return std::cos(w);
        case ModelMode::mch: return 1.0;
        case ModelMode::mch_cubic: return 1.0 - 0.5 * w * w;
    }
    return 0.0;
}

Spectrum times_ik(Spectrum c, const std::vector<double>& k) {
    const std::size_t nyq = c.size() - 1;
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= (j == nyq) ? cplx{0.0, 0.0} : cplx{0.0, k[j]};
    return c;
}

// u, u_x, m (and optionally m_x) sampled on the 2n-point padded grid.
struct Padded {
    std::vector<double> u, ux, m, mx;
};

Padded pad_state(SpectralEngine& eng, const Spectrum& cu, const Spectrum& cm, bool with_mx) {
    Padded p;
    p.u = eng.to_padded(cu);
    p.ux = eng.to_padded(times_ik(cu, eng.wavenumbers()));
    p.m = eng.to_padded(cm);
    if (with_mx) p.mx = eng.to_padded(times_ik(cm, eng.wavenumbers()));
    return p;
}

void require_state(const SolutionState& s) {
    require_same_grid(s.u, s.m, "solution state");
    s.u.require_finite("state u");
    s.m.require_finite("state m");
}

}  // namespace

SolutionState SolutionState::from_m(double t, Field m) {
    Field u = helmholtz_solve(m);
    return SolutionState{t, std::move(u), std::move(m)};
}

double helmholtz_link_residual(const SolutionState& state) {
    require_state(state);
    const Field r = helmholtz_apply(state.u) - state.m;
    return r.max_abs() / std::max(state.m.max_abs(), 1e-300);
}

std::string to_string(ModelMode mode) {
    switch (mode) {
        case ModelMode::sine: return "sine";
        case ModelMode::mch: return "mch";
        case ModelMode::mch_cubic: return "mch_cubic";
    }
    return "unknown";
}

ModelMode parse_model_mode(const std::string& name) {
    if (name == "sine") return ModelMode::sine;
    if (name == "mch") return ModelMode::mch;
    if (name == "mch_cubic") return ModelMode::mch_cubic;
    throw ConfigError("unknown model mode '" + name + "' (expected sine, mch or mch_cubic)");
}

Field velocity(const Field& u, const Field& ux) {
    require_same_grid(u, ux, "velocity");
    u.require_finite("velocity input u");
    ux.require_finite("velocity input u_x");
    Field w = dealiased_product(u, u) - dealiased_product(ux, ux);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::sin(w[j]);
    return w;
}

Field blowup_quantity(const SolutionState& state) {
    require_state(state);
    const Field ux = derivative(state.u);
    Field M(state.grid());
    for (std::size_t j = 0; j < M.size(); ++j) {
        const double w = state.u[j] * state.u[j] - ux[j] * ux[j];
        M[j] = std::cos(w) * state.m[j] * ux[j];
    }
    return M;
}

namespace {

Field conservative_rhs(SpectralEngine& eng, const Spectrum& cu, const Spectrum& cm,
                       const ModelParams& params) {
    const Padded p = pad_state(eng, cu, cm, false);
    std::vector<double> flux(p.u.size());
    for (std::size_t j = 0; j < flux.size(); ++j) {
        const double w = p.u[j] * p.u[j] - p.ux[j] * p.ux[j];
        flux[j] = nonlinearity(params.mode, w) * p.m[j];
    }
    Spectrum c = times_ik(eng.from_padded(flux), eng.wavenumbers());
    if (params.kappa != 0.0) {
        const Spectrum cux = times_ik(cu, eng.wavenumbers());
        for (std::size_t j = 0; j < c.size(); ++j) c[j] += params.kappa * cux[j];
    }
    for (auto& v : c) v = -v;
    return eng.inverse(c);
}

}  // namespace

Field m_rhs(const SolutionState& state, const ModelParams& params) {
    require_state(state);
    auto& eng = engine_for(state.grid());
    return conservative_rhs(eng, eng.forward(state.u), eng.forward(state.m), params);
}

Field m_rhs_from_m(const Field& m, const ModelParams& params) {
    m.require_finite("m");
    auto& eng = engine_for(m.grid());
    const Spectrum cm = eng.forward(m);
    Spectrum cu = cm;
    const auto& k = eng.wavenumbers();
    for (std::size_t j = 0; j < cu.size(); ++j) cu[j] /= 1.0 + k[j] * k[j];
    return conservative_rhs(eng, cu, cm, params);
}

Field m_rhs_transport(const SolutionState& state, const ModelParams& params) {
    require_state(state);
    auto& eng = engine_for(state.grid());
    const Spectrum cu = eng.forward(state.u);
    const Padded p = pad_state(eng, cu, eng.forward(state.m), true);
    std::vector<double> g(p.u.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double w = p.u[j] * p.u[j] - p.ux[j] * p.ux[j];
        g[j] = -nonlinearity(params.mode, w) * p.mx[j] -
               2.0 * nonlinearity_slope(params.mode, w) * p.ux[j] * p.m[j] * p.m[j];
    }
    Spectrum c = eng.from_padded(g);
    if (params.kappa != 0.0) {
        const Spectrum cux = times_ik(cu, eng.wavenumbers());
        for (std::size_t j = 0; j < c.size(); ++j) c[j] -= params.kappa * cux[j];
    }
    return eng.inverse(c);
}

namespace {

// Projected V u_x (or V u_xx), u M and u_x M for the nonlocal forms.
struct NonlocalTerms {
    Field advective, uM, uxM;
};

NonlocalTerms nonlocal_terms(const SolutionState& state, const ModelParams& params, bool second) {
    require_state(state);
    if (params.kappa != 0.0) {
        throw UnsupportedConfiguration("the nonlocal u-form is only available for kappa = 0");
    }
    auto& eng = engine_for(state.grid());
    const Spectrum cu = eng.forward(state.u);
    const Padded p = pad_state(eng, cu, eng.forward(state.m), false);
    std::vector<double> uxx;
    if (second) uxx = eng.to_padded(times_ik(times_ik(cu, eng.wavenumbers()), eng.wavenumbers()));
    const std::size_t np = p.u.size();
    std::vector<double> adv(np), um(np), uxm(np);
    for (std::size_t j = 0; j < np; ++j) {
        const double w = p.u[j] * p.u[j] - p.ux[j] * p.ux[j];
        const double M = nonlinearity_slope(params.mode, w) * p.m[j] * p.ux[j];
        adv[j] = nonlinearity(params.mode, w) * (second ? uxx[j] : p.ux[j]);
        um[j] = p.u[j] * M;
        uxm[j] = p.ux[j] * M;
    }
    return {eng.inverse(eng.from_padded(adv)), eng.inverse(eng.from_padded(um)),
            eng.inverse(eng.from_padded(uxm))};
}

}  // namespace

Field u_rhs_nonlocal(const SolutionState& state, const ModelParams& params) {
    const NonlocalTerms t = nonlocal_terms(state, params, false);
    Field out = -1.0 * t.advective;
    out.axpy(-2.0, convolve_p(t.uM));
    out.axpy(-2.0, convolve_p_x(t.uxM));
    return out;
}

Field ux_rhs_nonlocal(const SolutionState& state, const ModelParams& params) {
    const NonlocalTerms t = nonlocal_terms(state, params, true);
    Field out = -1.0 * t.advective;
    out.axpy(-2.0, convolve_p_x(t.uM));
    out.axpy(-2.0, convolve_p(t.uxM));
    return out;
}

Field mch_rhs(const SolutionState& state) {
    return m_rhs(state, ModelParams{0.0, ModelMode::mch});
}

}  // namespace smch
