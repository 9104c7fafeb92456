#include "smch/analysis.hpp"

#include <cmath>
#include <limits>

#include "smch/characteristics.hpp"
#include "smch/errors.hpp"
#include "smch/spectral.hpp"

namespace smch {

DiagnosticsRecord make_record(const SolutionState& state, double blowup_integral) {
    DiagnosticsRecord r;
    r.t = state.t;
    r.h1 = h1(state);
    r.m_inf = state.m.max_abs();
    r.m_l2 = state.m.l2_norm();
    r.min_M = blowup_quantity(state).min();
    r.blowup_integral = blowup_integral;
    r.u_inf = state.u.max_abs();
    r.ux_inf = derivative(state.u).max_abs();
    r.uxx_inf = second_derivative(state.u).max_abs();
    return r;
}

double h1(const SolutionState& state) {
    require_same_grid(state.u, state.m, "h1");
    double s = 0.0;
    for (std::size_t j = 0; j < state.m.size(); ++j) s += state.m[j] * state.u[j];
    return s * state.grid().spacing();
}

YoungRatios young_probe(const SolutionState& state) {
    const double m_inf = state.m.max_abs();
    if (m_inf == 0.0) throw NumericError("young_probe: ratios are undefined for m = 0");
    return {state.u.max_abs() / m_inf, derivative(state.u).max_abs() / m_inf,
            second_derivative(state.u).max_abs() / m_inf};
}

double min_M_track(const SolutionState& state) { return 2.0 * blowup_quantity(state).min(); }

double BreakingCertificate::envelope(double t) const {
    return 2.0 * ((Mbar0 / mbar0) * t + 0.5 * C1 * t * t) + 1.0 / mbar0;
}

BreakingCertificate certificate_from_values(double Mbar0, double mbar0, double C1) {
    if (!(mbar0 > 0.0)) throw HypothesisViolation("certificate needs mbar(0) > 0");
    if (!(C1 > 0.0) || !std::isfinite(C1)) throw ConfigError("certificate needs a positive finite C1");
    BreakingCertificate c;
    c.Mbar0 = Mbar0;
    c.mbar0 = mbar0;
    c.C1 = C1;
    c.xi = -Mbar0 / (C1 * mbar0);
    const double ratio = Mbar0 / mbar0;
    const double quad = ratio * c.xi + 0.5 * C1 * c.xi * c.xi;
    c.A_xi = quad + 1.0 / mbar0;
    c.h_xi = 2.0 * quad + 1.0 / mbar0;
    c.fires = Mbar0 < 0.0 && c.A_xi < 0.0;
    if (c.fires) c.predicted_window = {0.0, c.xi};
    return c;
}

BreakingCertificate certify(const SolutionState& state0, double C) {
    if (!(C > 0.0) || !std::isfinite(C)) throw ConfigError("certificate constant C must be positive");
    const Field& m0 = state0.m;
    m0.require_finite("initial m");
    if (m0.min() < -1e-12) {
        throw HypothesisViolation("initial momentum m0 takes negative values (min " +
                                  std::to_string(m0.min()) + ")");
    }
    const double m_inf = m0.max_abs();
    if (m_inf == 0.0) throw HypothesisViolation("initial momentum m0 vanishes identically");

    const Field M = blowup_quantity(state0);
    std::size_t best = m0.size();
    for (std::size_t j = 0; j < m0.size(); ++j) {
        if (m0[j] > 1e-8 * m_inf && (best == m0.size() || M[j] < M[best])) best = j;
    }
    const double H = sobolev_norm(state0.u, 1.0);
    const double C1 = C * (std::pow(H, 5) + std::pow(H, 3));
    BreakingCertificate c = certificate_from_values(M[best], m0[best], C1);
    c.x0 = m0.grid().x(best);
    c.C = C;
    return c;
}

EnvelopeReport envelope_check(const CharacteristicBundle& bundle, const BreakingCertificate& cert,
                              double h1_norm_u0) {
    std::size_t k = bundle.seeds.size();
    for (std::size_t i = 0; i < bundle.seeds.size(); ++i) {
        if (std::abs(bundle.seeds[i] - cert.x0) <= 1e-9 * std::max(1.0, std::abs(cert.x0))) k = i;
    }
    if (k == bundle.seeds.size()) throw ConfigError("envelope_check: the bundle has no seed at the certificate's x0");
    const auto& t = bundle.times;
    const auto& mb = bundle.mbar[k];
    const auto& Mb = bundle.Mbar[k];
    EnvelopeReport rep;
    rep.samples = t.size();
    if (t.empty()) return rep;

    if (!(mb[0] > 0.0)) throw ConfigError("envelope_check needs m0(x0) > 0");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(mb[i] > 0.0)) {
            throw InvariantViolation("mbar changed sign along the characteristic at t = " + std::to_string(t[i]));
        }
    }
    const double r0 = Mb[0] / mb[0];
    double c1 = 0.0;
    rep.max_envelope_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double s = t[i] - t[0];
        if (i > 0 && s > 0.0) c1 = std::max(c1, (Mb[i] / mb[i] - r0) / s);
        const double inv = 1.0 / mb[i];
        rep.inverse_positive = rep.inverse_positive && inv > 0.0;
        const double excess = inv - cert.envelope(s);
        rep.max_envelope_excess = std::max(rep.max_envelope_excess, excess);
    }
    rep.envelope_holds = rep.max_envelope_excess <= 0.0;
    rep.C1_empirical = c1;

    double ric = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const double dM = (Mb[i + 1] - Mb[i - 1]) / (t[i + 1] - t[i - 1]);
        ric = std::max(ric, (dM + 2.0 * Mb[i] * Mb[i]) / mb[i]);
    }
    rep.C1_riccati_empirical = std::isfinite(ric) ? ric : 0.0;
    const double scale = std::pow(h1_norm_u0, 5) + std::pow(h1_norm_u0, 3);
    rep.C_riccati_empirical = scale > 0.0 ? rep.C1_riccati_empirical / scale : 0.0;
    return rep;
}

}  // namespace smch
