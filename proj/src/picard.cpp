#include "smch/picard.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "smch/errors.hpp"
#include "smch/integrator.hpp"
#include "smch/spectral.hpp"

namespace smch {

void validate(const PicardConfig& cfg) {
    if (cfg.iterations < 2) throw ConfigError("picard.iterations must be >= 2");
    if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) throw ConfigError("picard.T must be positive");
    if (!(cfg.dt > 0.0) || cfg.dt > cfg.T) throw ConfigError("picard.dt must lie in (0, T]");
    auto valid_index = [](double v) { return v == kInfinity || (std::isfinite(v) && v >= 1.0); };
    if (!valid_index(cfg.p) || !valid_index(cfg.r)) throw ConfigError("picard p, r must lie in [1, inf]");
    if (!std::isfinite(cfg.s)) throw ConfigError("picard.s must be finite");
    if (!(cfg.C_user > 0.0)) throw ConfigError("picard.C_user must be positive");
}

Field friedrichs_data(const Field& m0, int l, const DyadicPartition& P) {
    if (l < 0) throw ConfigError("friedrichs_data index must be >= 0");
    return low_freq_sum(m0, l + 1, P);
}

TransportCoefficients transport_coefficients(const Trajectory& m_prev) {
    TransportCoefficients c;
    c.velocity.reserve(m_prev.size());
    c.source.reserve(m_prev.size());
    for (const Field& m : m_prev) {
        auto& eng = engine_for(m.grid());
        const Spectrum cm = eng.forward(m);
        Spectrum cu = cm;
        Spectrum cux = cm;
        const auto& k = eng.wavenumbers();
        for (std::size_t j = 0; j < cu.size(); ++j) {
            cu[j] /= 1.0 + k[j] * k[j];
            cux[j] = (j + 1 == cu.size()) ? 0.0 : std::complex<double>{0.0, k[j]} * cu[j];
        }
        const auto u = eng.to_padded(cu);
        const auto ux = eng.to_padded(cux);
        const auto mp = eng.to_padded(cm);
        std::vector<double> V(u.size()), S(u.size());
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double w = u[j] * u[j] - ux[j] * ux[j];
            V[j] = std::sin(w);
            S[j] = -2.0 * std::cos(w) * ux[j] * mp[j] * mp[j];
        }
        c.velocity.push_back(eng.inverse(eng.from_padded(V)));
        c.source.push_back(eng.inverse(eng.from_padded(S)));
    }
    return c;
}

namespace {

Field transport_rhs(const Field& m, const Field& V, const Field& S) {
    Field out = S;
    out.axpy(-1.0, dealiased_product(V, derivative(m)));
    return out;
}

Field midpoint(const Field& a, const Field& b) {
    Field out = a;
    out += b;
    out *= 0.5;
    return out;
}

}  // namespace

Trajectory solve_linear_transport(const TransportCoefficients& coeffs, const Field& m_init, double dt) {
    if (coeffs.velocity.size() != coeffs.source.size() || coeffs.velocity.empty()) {
        throw ConfigError("transport coefficients must be non-empty and aligned");
    }
    if (!(dt > 0.0)) throw ConfigError("transport step must be positive");
    Trajectory out;
    out.reserve(coeffs.velocity.size());
    out.push_back(m_init);
    for (std::size_t i = 0; i + 1 < coeffs.velocity.size(); ++i) {
        const Field& V0 = coeffs.velocity[i];
        const Field& V1 = coeffs.velocity[i + 1];
        const Field& S0 = coeffs.source[i];
        const Field& S1 = coeffs.source[i + 1];
        const Field Vh = midpoint(V0, V1);
        const Field Sh = midpoint(S0, S1);
        const Field& m = out.back();
        const Field k1 = transport_rhs(m, V0, S0);
        const Field k2 = transport_rhs(Field(m).axpy(0.5 * dt, k1), Vh, Sh);
        const Field k3 = transport_rhs(Field(m).axpy(0.5 * dt, k2), Vh, Sh);
        const Field k4 = transport_rhs(Field(m).axpy(dt, k3), V1, S1);
        Field next = m;
        for (std::size_t j = 0; j < next.size(); ++j) {
            next[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        next.require_finite("linear transport update");
        out.push_back(std::move(next));
    }
    return out;
}

Trajectory picard_step(const Trajectory& m_prev, const Field& m0_l, double dt) {
    return solve_linear_transport(transport_coefficients(m_prev), m0_l, dt);
}

Trajectory solver_trajectory(const Field& m0, double dt, std::size_t steps) {
    Trajectory out;
    out.reserve(steps + 1);
    SolutionState s = SolutionState::from_m(0.0, m0);
    out.push_back(s.m);
    for (std::size_t i = 0; i < steps; ++i) {
        s = step_rk4(s, dt, ModelParams{});
        out.push_back(s.m);
    }
    return out;
}

namespace {

double sup_norm_over_time(const Trajectory& a, const Trajectory* b, double s, double p, double r,
                          const DyadicPartition& P) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Field f = b ? a[i] - (*b)[i] : a[i];
        sup = std::max(sup, besov_norm(f, s, p, r, P));
    }
    return sup;
}

double fit_ratio(const std::vector<double>& d, double floor, int& points) {
    std::vector<std::pair<double, double>> pts;
    const std::size_t start = d.size() / 2;
    for (std::size_t l = start; l < d.size(); ++l) {
        if (d[l] > floor) pts.emplace_back(static_cast<double>(l), std::log(d[l]));
    }
    if (pts.size() < 2) {
        // The tail has converged to roundoff; fall back to the last two resolved differences.
        pts.clear();
        for (std::size_t l = d.size(); l-- > 0 && pts.size() < 2;) {
            if (d[l] > floor) pts.emplace(pts.begin(), static_cast<double>(l), std::log(d[l]));
        }
    }
    points = static_cast<int>(pts.size());
    if (pts.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::exp(slope);
}

}  // namespace

PicardReport run_picard(const Field& m0, const PicardConfig& cfg) {
    validate(cfg);
    m0.require_finite("picard initial data");
    const DyadicPartition P = build_partition(m0.grid(), cfg.delta);
    const auto steps = static_cast<std::size_t>(std::ceil(cfg.T / cfg.dt - 1e-9));
    const double dt = cfg.T / static_cast<double>(steps);
    const double sw = cfg.s - 3.0;

    PicardReport rep;
    rep.dt = dt;
    Trajectory prev(steps + 1, Field(m0.grid()));
    for (int l = 0; l < cfg.iterations; ++l) {
        Trajectory next;
        try {
            next = picard_step(prev, friedrichs_data(m0, l, P), dt);
        } catch (const NumericError&) {
            throw HorizonTooLarge("Picard iterate " + std::to_string(l + 1) + " became non-finite within T");
        }
        for (const Field& f : next) {
            if (f.max_abs() > cfg.max_m_inf) {
                throw HorizonTooLarge("Picard iterate " + std::to_string(l + 1) + " exceeded |m|_inf bound within T");
            }
        }
        rep.iterate_norms.push_back(sup_norm_over_time(next, nullptr, sw, cfg.p, cfg.r, P));
        rep.differences.push_back(sup_norm_over_time(next, &prev, sw, cfg.p, cfg.r, P));
        prev = std::move(next);
    }
    for (double v : rep.iterate_norms) rep.max_iterate_norm = std::max(rep.max_iterate_norm, v);
    const double floor = 1e-13 * std::max(rep.max_iterate_norm, std::numeric_limits<double>::min());
    rep.rho = fit_ratio(rep.differences, floor, rep.fit_points);

    const double u0_norm = besov_norm(helmholtz_solve(m0), cfg.s, cfg.p, cfg.r, P);
    rep.existence_bound = u0_norm > 0.0 ? 1.0 / (4.0 * cfg.C_user * u0_norm * u0_norm)
                                        : std::numeric_limits<double>::infinity();
    if (cfg.compare_with_solver) {
        const Trajectory direct = solver_trajectory(m0, dt, steps);
        double gap = 0.0;
        for (std::size_t i = 0; i < direct.size(); ++i) gap = std::max(gap, (prev[i] - direct[i]).l2_norm());
        rep.solver_gap_l2 = gap;
    }
    rep.final_iterate = std::move(prev);
    return rep;
}

}  // namespace smch
