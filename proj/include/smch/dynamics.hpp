#pragma once

#include <string>

#include "smch/field.hpp"

namespace smch {

/// u and m on one grid, linked by m = u - u_xx.
struct SolutionState {
    double t = 0.0;
    Field u;
    Field m;

    /// Builds the state from m, deriving u with helmholtz_solve.
    static SolutionState from_m(double t, Field m);
    const GridSpec& grid() const { return m.grid(); }
};

/// Relative spectral residual |(1 - d^2) u - m|_inf / max(|m|_inf, tiny).
double helmholtz_link_residual(const SolutionState& state);

enum class ModelMode {
    sine,       ///< velocity sin(u^2 - u_x^2)
    mch,        ///< velocity u^2 - u_x^2
    mch_cubic,  ///< first two terms of the sine series, w - w^3/6
};

std::string to_string(ModelMode mode);
/// Throws ConfigError on unknown names.
ModelMode parse_model_mode(const std::string& name);

struct ModelParams {
    double kappa = 0.0;
    ModelMode mode = ModelMode::sine;

    bool operator==(const ModelParams&) const = default;
};

/// V = sin(w) with w = u^2 - u_x^2 projected on the resolved modes; |V| <= 1.
Field velocity(const Field& u, const Field& ux);

/// M = cos(u^2 - u_x^2) m u_x evaluated at the grid points.
Field blowup_quantity(const SolutionState& state);

/// Conservative form: m_t = -d/dx[F(w) m] - kappa u_x, with the product
/// formed on the 2n-point padded grid.
Field m_rhs(const SolutionState& state, const ModelParams& params);
/// Transport form: -F(w) m_x - 2 F'(w) u_x m^2 - kappa u_x. Same value as m_rhs
/// up to spectral accuracy; used as a cross-check.
Field m_rhs_transport(const SolutionState& state, const ModelParams& params);
/// Fast path used by the steppers: m is the only input, u is derived internally.
Field m_rhs_from_m(const Field& m, const ModelParams& params);

/// u_t = -V u_x - 2 p*(u M) - 2 p_x*(u_x M). Throws UnsupportedConfiguration for kappa != 0.
Field u_rhs_nonlocal(const SolutionState& state, const ModelParams& params = {});
/// d/dx of the nonlocal form: -V u_xx - 2 p_x*(u M) - 2 p*(u_x M).
Field ux_rhs_nonlocal(const SolutionState& state, const ModelParams& params = {});

/// Plain mCH right-hand side -[(u^2 - u_x^2) m]_x.
Field mch_rhs(const SolutionState& state);

}  // namespace smch
