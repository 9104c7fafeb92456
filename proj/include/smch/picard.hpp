#pragma once

#include <vector>

#include "smch/dynamics.hpp"
#include "smch/littlewood_paley.hpp"

namespace smch {

/// m sampled at t_k = k dt, k = 0..N.
using Trajectory = std::vector<Field>;

struct PicardConfig {
    int iterations = 8;
    double T = 0.5;
    /// Data regularity; differences are measured in B^{s-3}_{p,r}.
    double s = 3.0;
    double p = 2.0;
    double r = 2.0;
    /// Inner transport step; adjusted down so that T is an integer number of steps.
    double dt = 1e-2;
    /// Constant in the existence bound 1 / (4 C |u0|^2).
    double C_user = 1.0;
    double delta = 0.05;
    /// An iterate with |m|_inf beyond this inside [0, T] aborts with HorizonTooLarge.
    double max_m_inf = 1e6;
    bool compare_with_solver = true;

    bool operator==(const PicardConfig&) const = default;
};

void validate(const PicardConfig& cfg);

struct PicardReport {
    /// sup_t |m^{(l)}| in the working norm, l = 1..iterations.
    std::vector<double> iterate_norms;
    /// d_l = sup_t |m^{(l+1)} - m^{(l)}| in the working norm, l = 0..iterations-1.
    std::vector<double> differences;
    /// exp of the least-squares slope of log d_l over the last half of the iterations.
    double rho = 0.0;
    int fit_points = 0;
    double existence_bound = 0.0;
    double max_iterate_norm = 0.0;
    /// sup_t |m^{(iterations)} - m_solver|_{L2}; negative when not computed.
    double solver_gap_l2 = -1.0;
    double dt = 0.0;
    Trajectory final_iterate;
};

/// S_{l+1} m0.
Field friedrichs_data(const Field& m0, int l, const DyadicPartition& P);

/// Frozen coefficients of the linear transport problem built from iterate l:
/// velocity sin(w) and source -2 cos(w) u_x m^2, w = u^2 - u_x^2, u = p * m.
struct TransportCoefficients {
    Trajectory velocity;
    Trajectory source;
};

TransportCoefficients transport_coefficients(const Trajectory& m_prev);

/// RK4 for m_t + V m_x = S with V, S linearly interpolated between stored times.
Trajectory solve_linear_transport(const TransportCoefficients& coeffs, const Field& m_init, double dt);

/// One Picard iterate: transport with coefficients from m_prev, data m0_l.
Trajectory picard_step(const Trajectory& m_prev, const Field& m0_l, double dt);

/// Direct solver trajectory with fixed RK4 steps of size dt (sine model).
Trajectory solver_trajectory(const Field& m0, double dt, std::size_t steps);

PicardReport run_picard(const Field& m0, const PicardConfig& cfg);

}  // namespace smch
