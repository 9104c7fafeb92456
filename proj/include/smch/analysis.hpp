#pragma once

#include <array>
#include <string>
#include <vector>

#include "smch/dynamics.hpp"

namespace smch {

struct CharacteristicBundle;

/// Per-output-time diagnostics emitted by the integrator.
struct DiagnosticsRecord {
    double t = 0.0;
    double h1 = 0.0;               ///< integral of m u
    double m_inf = 0.0;
    double m_l2 = 0.0;
    double min_M = 0.0;            ///< min_x M(t, x)
    double blowup_integral = 0.0;  ///< running trapezoid of |m|_inf^2
    double u_inf = 0.0;
    double ux_inf = 0.0;
    double uxx_inf = 0.0;

    bool operator==(const DiagnosticsRecord&) const = default;
};

DiagnosticsRecord make_record(const SolutionState& state, double blowup_integral);

/// H1 = integral of m u by grid quadrature.
double h1(const SolutionState& state);

struct YoungRatios {
    double u = 0.0;    ///< |u|_inf / |m|_inf
    double ux = 0.0;   ///< |u_x|_inf / |m|_inf
    double uxx = 0.0;  ///< |u_xx|_inf / |m|_inf
};

/// Throws NumericError when m vanishes identically.
YoungRatios young_probe(const SolutionState& state);

/// 2 min_x M(t, x), the quantity whose divergence to -inf characterises blow-up.
double min_M_track(const SolutionState& state);

/// Wave-breaking certificate for nonnegative initial momentum.
struct BreakingCertificate {
    double x0 = 0.0;
    double mbar0 = 0.0;
    double Mbar0 = 0.0;
    double C = 1.0;
    double C1 = 0.0;
    double xi = 0.0;
    /// (Mbar0/mbar0) xi + C1 xi^2 / 2 + 1/mbar0; the certificate fires on this form.
    double A_xi = 0.0;
    /// 2 ((Mbar0/mbar0) xi + C1 xi^2 / 2) + 1/mbar0, the envelope bounding 1/mbar.
    double h_xi = 0.0;
    bool fires = false;
    /// (0, xi] when the certificate fires.
    std::array<double, 2> predicted_window{0.0, 0.0};

    /// Envelope h(t) = 2((Mbar0/mbar0) t + C1 t^2/2) + 1/mbar0.
    double envelope(double t) const;
};

/// Evaluates xi, A(xi), h(xi) and the firing rule from the three scalars.
BreakingCertificate certificate_from_values(double Mbar0, double mbar0, double C1);

/// Chooses x0 as the grid argmin of M(0, .) over points with m0 > 1e-8 |m0|_inf and
/// evaluates the certificate with C1 = C (|u0|_{H1}^5 + |u0|_{H1}^3).
/// Throws HypothesisViolation when m0 < -1e-12 somewhere or m0 vanishes.
BreakingCertificate certify(const SolutionState& state0, double C = 1.0);

struct EnvelopeReport {
    /// Smallest C1 with Mbar/mbar <= Mbar0/mbar0 + C1 t over the samples (>= 0).
    double C1_empirical = 0.0;
    /// Smallest C1 with dMbar/dt <= -2 Mbar^2 + C1 mbar (centered differences).
    double C1_riccati_empirical = 0.0;
    /// Same bound divided by |u0|_{H1}^5 + |u0|_{H1}^3 when that is supplied.
    double C_riccati_empirical = 0.0;
    bool inverse_positive = true;       ///< 1/mbar > 0 at every sample
    bool envelope_holds = true;         ///< 1/mbar <= h(t) at every sample
    double max_envelope_excess = 0.0;   ///< max(1/mbar - h(t))
    std::size_t samples = 0;
};

/// Checks the Riccati envelope along the characteristic started at cert.x0, which must
/// be one of the bundle seeds (ConfigError otherwise). Throws InvariantViolation if
/// mbar changes sign along it.
EnvelopeReport envelope_check(const CharacteristicBundle& bundle, const BreakingCertificate& cert,
                              double h1_norm_u0 = 0.0);

}  // namespace smch
