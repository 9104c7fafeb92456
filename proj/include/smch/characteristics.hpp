#pragma once

#include <iosfwd>
#include <vector>

#include "smch/dynamics.hpp"
#include "smch/spectral.hpp"

namespace smch {

/// Stored snapshots of V, m and M in spectral form, for off-grid evaluation.
/// Between stored times the fields are interpolated linearly in t.
class FieldHistory {
public:
    FieldHistory() = default;
    explicit FieldHistory(const GridSpec& grid) : grid_(grid) {}

    /// Appends a solver state; V and M are derived from it. Times must increase.
    void push_state(const SolutionState& state);
    /// Appends explicit fields (used to inject synthetic velocity fields).
    void push_fields(double t, const Field& V, const Field& m, const Field& M);

    const GridSpec& grid() const { return grid_; }
    const std::vector<double>& times() const { return times_; }
    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }

    double velocity_at(std::size_t i, double x) const;
    double m_at(std::size_t i, double x) const;
    double M_at(std::size_t i, double x) const;
    /// V at time t in [times[i], times[i+1]] from the two bracketing snapshots.
    double velocity_between(std::size_t i, double t, double x) const;
    /// m at the first stored time.
    double m0_at(double x) const { return m_at(0, x); }

private:
    GridSpec grid_{};
    std::vector<double> times_;
    std::vector<Spectrum> V_, m_, M_;
};

/// Trajectories q(t, x0) with m and M sampled along them at every history time.
struct CharacteristicBundle {
    std::vector<double> seeds;
    std::vector<double> times;
    /// [seed][time]
    std::vector<std::vector<double>> q;
    /// Centered difference of companion trajectories started at x0 +- fd_spacing.
    std::vector<std::vector<double>> qx;
    std::vector<std::vector<double>> mbar;
    std::vector<std::vector<double>> Mbar;
    std::vector<double> m0_at_seeds;
    double fd_spacing = 0.0;
};

struct AdvectOptions {
    /// Seed spacing of the companion trajectories used for qx; 0 disables them.
    double fd_spacing = 1e-3;
    /// RK4 substeps per stored history interval.
    int substeps = 1;
    /// Worker threads across seeds (0: SMCH_THREADS or hardware concurrency).
    unsigned threads = 0;
};

/// RK4 integration of dq/dt = V(t, q), q(0) = x0, with trigonometric interpolation
/// in space. Throws DomainContaminationError when a trajectory leaves [-L/2, L/2].
CharacteristicBundle advect(const std::vector<double>& seeds, const FieldHistory& history,
                            const AdvectOptions& options = {});

/// q_x = exp(2 int_0^t Mbar ds), trapezoidal in time; [seed][time].
std::vector<std::vector<double>> qx_closed_form(const CharacteristicBundle& bundle);

/// mbar = m0(x0) exp(-2 int_0^t Mbar ds); [seed][time].
std::vector<std::vector<double>> mbar_closed_form(const CharacteristicBundle& bundle,
                                                  const std::vector<double>& m0_at_seeds);

struct OdeResidual {
    double sup_residual = 0.0;  ///< sup over interior samples of |dmbar/dt + 2 mbar Mbar|
    double sup_source = 0.0;    ///< sup of |mbar Mbar|
};

/// Centered-difference residual of dmbar/dt = -2 mbar Mbar. Needs at least three
/// uniformly spaced output times (ConfigError otherwise).
std::vector<OdeResidual> mbar_ode_residual(const CharacteristicBundle& bundle);

/// CSV rows: seed, t, q, qx_formula, qx_fd, mbar_field, mbar_formula, Mbar.
void write_bundle_csv(std::ostream& os, const CharacteristicBundle& bundle);

}  // namespace smch
