#include "smch/characteristics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "smch/errors.hpp"
#include "smch/parallel.hpp"

namespace smch {

void FieldHistory::push_state(const SolutionState& state) {
    const Field ux = derivative(state.u);
    push_fields(state.t, velocity(state.u, ux), state.m, blowup_quantity(state));
}

void FieldHistory::push_fields(double t, const Field& V, const Field& m, const Field& M) {
    if (times_.empty() && grid_.n == 0) grid_ = m.grid();
    if (!(V.grid() == grid_) || !(m.grid() == grid_) || !(M.grid() == grid_)) {
        throw ConfigError("field history grid mismatch");
    }
    if (!times_.empty() && !(t > times_.back())) {
        throw ConfigError("field history times must be strictly increasing");
    }
    auto& eng = engine_for(grid_);
    times_.push_back(t);
    V_.push_back(eng.forward(V));
    m_.push_back(eng.forward(m));
    M_.push_back(eng.forward(M));
}

double FieldHistory::velocity_at(std::size_t i, double x) const {
    return engine_for(grid_).interpolate(V_.at(i), x);
}

double FieldHistory::m_at(std::size_t i, double x) const {
    return engine_for(grid_).interpolate(m_.at(i), x);
}

double FieldHistory::M_at(std::size_t i, double x) const {
    return engine_for(grid_).interpolate(M_.at(i), x);
}

double FieldHistory::velocity_between(std::size_t i, double t, double x) const {
    const double t0 = times_.at(i);
    const double t1 = times_.at(i + 1);
    const double theta = (t - t0) / (t1 - t0);
    const double v0 = velocity_at(i, x);
    if (theta == 0.0) return v0;
    return (1.0 - theta) * v0 + theta * velocity_at(i + 1, x);
}

namespace {

std::vector<double> trajectory(double x0, const FieldHistory& history, int substeps) {
    const auto& times = history.times();
    const double limit = 0.5 * history.grid().half_length;
    std::vector<double> q(times.size());
    q[0] = x0;
    double x = x0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double dt = (times[i + 1] - times[i]) / substeps;
        for (int s = 0; s < substeps; ++s) {
            const double t = times[i] + s * dt;
            const double k1 = history.velocity_between(i, t, x);
            const double k2 = history.velocity_between(i, t + 0.5 * dt, x + 0.5 * dt * k1);
            const double k3 = history.velocity_between(i, t + 0.5 * dt, x + 0.5 * dt * k2);
            const double k4 = history.velocity_between(i, t + dt, x + dt * k3);
            x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (!std::isfinite(x) || std::abs(x) > limit) {
            throw DomainContaminationError("characteristic from x0 = " + std::to_string(x0) +
                                           " left [-L/2, L/2] at t = " + std::to_string(times[i + 1]));
        }
        q[i + 1] = x;
    }
    return q;
}

}  // namespace

CharacteristicBundle advect(const std::vector<double>& seeds, const FieldHistory& history,
                            const AdvectOptions& options) {
    if (history.empty()) throw ConfigError("advect needs a non-empty field history");
    if (options.substeps < 1) throw ConfigError("advect substeps must be >= 1");
    const double limit = 0.5 * history.grid().half_length;
    for (double s : seeds) {
        if (!(std::abs(s) <= limit)) {
            throw DomainContaminationError("seed " + std::to_string(s) + " lies outside [-L/2, L/2]");
        }
    }
    const std::size_t ns = seeds.size();
    const std::size_t nt = history.size();
    const bool fd = options.fd_spacing > 0.0;
    CharacteristicBundle b;
    b.seeds = seeds;
    b.times = history.times();
    b.fd_spacing = options.fd_spacing;
    b.q.resize(ns);
    b.qx.assign(ns, std::vector<double>(nt, std::numeric_limits<double>::quiet_NaN()));
    b.mbar.resize(ns);
    b.Mbar.resize(ns);
    b.m0_at_seeds.resize(ns);

    parallel_for(ns, worker_count(options.threads), [&](std::size_t k) {
        b.q[k] = trajectory(seeds[k], history, options.substeps);
        if (fd) {
            const auto plus = trajectory(seeds[k] + options.fd_spacing, history, options.substeps);
            const auto minus = trajectory(seeds[k] - options.fd_spacing, history, options.substeps);
            for (std::size_t i = 0; i < nt; ++i) b.qx[k][i] = (plus[i] - minus[i]) / (2.0 * options.fd_spacing);
        }
        b.mbar[k].resize(nt);
        b.Mbar[k].resize(nt);
        for (std::size_t i = 0; i < nt; ++i) {
            b.mbar[k][i] = history.m_at(i, b.q[k][i]);
            b.Mbar[k][i] = history.M_at(i, b.q[k][i]);
        }
        b.m0_at_seeds[k] = history.m0_at(seeds[k]);
    });
    return b;
}

namespace {

// Running trapezoid of Mbar along each seed.
std::vector<std::vector<double>> integrated_M(const CharacteristicBundle& b) {
    std::vector<std::vector<double>> out(b.seeds.size());
    for (std::size_t k = 0; k < b.seeds.size(); ++k) {
        out[k].assign(b.times.size(), 0.0);
        for (std::size_t i = 1; i < b.times.size(); ++i) {
            out[k][i] = out[k][i - 1] +
                        0.5 * (b.times[i] - b.times[i - 1]) * (b.Mbar[k][i] + b.Mbar[k][i - 1]);
        }
    }
    return out;
}

}  // namespace

std::vector<std::vector<double>> qx_closed_form(const CharacteristicBundle& bundle) {
    auto out = integrated_M(bundle);
    for (auto& row : out)
        for (double& v : row) v = std::exp(2.0 * v);
    return out;
}

std::vector<std::vector<double>> mbar_closed_form(const CharacteristicBundle& bundle,
                                                  const std::vector<double>& m0_at_seeds) {
    if (m0_at_seeds.size() != bundle.seeds.size()) {
        throw ConfigError("mbar_closed_form needs one m0 value per seed");
    }
    auto out = integrated_M(bundle);
    for (std::size_t k = 0; k < out.size(); ++k)
        for (double& v : out[k]) v = m0_at_seeds[k] * std::exp(-2.0 * v);
    return out;
}

std::vector<OdeResidual> mbar_ode_residual(const CharacteristicBundle& bundle) {
    const auto& t = bundle.times;
    if (t.size() < 3) throw ConfigError("mbar_ode_residual needs at least three output times");
    const double dt = t[1] - t[0];
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        if (std::abs((t[i + 1] - t[i]) - dt) > 1e-6 * dt) {
            throw ConfigError("mbar_ode_residual needs uniformly spaced output times");
        }
    }
    std::vector<OdeResidual> out(bundle.seeds.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto& mb = bundle.mbar[k];
        const auto& Mb = bundle.Mbar[k];
        for (std::size_t i = 0; i < t.size(); ++i) {
            out[k].sup_source = std::max(out[k].sup_source, std::abs(mb[i] * Mb[i]));
        }
        for (std::size_t i = 1; i + 1 < t.size(); ++i) {
            const double dmdt = (mb[i + 1] - mb[i - 1]) / (t[i + 1] - t[i - 1]);
            out[k].sup_residual = std::max(out[k].sup_residual, std::abs(dmdt + 2.0 * mb[i] * Mb[i]));
        }
    }
    return out;
}

void write_bundle_csv(std::ostream& os, const CharacteristicBundle& bundle) {
    const auto qx_formula = qx_closed_form(bundle);
    const auto mbar_formula = mbar_closed_form(bundle, bundle.m0_at_seeds);
    os << "seed,t,q,qx_formula,qx_fd,mbar_field,mbar_formula,Mbar\n";
    char line[512];
    for (std::size_t k = 0; k < bundle.seeds.size(); ++k) {
        for (std::size_t i = 0; i < bundle.times.size(); ++i) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          bundle.seeds[k], bundle.times[i], bundle.q[k][i], qx_formula[k][i],
                          bundle.qx[k][i], bundle.mbar[k][i], mbar_formula[k][i], bundle.Mbar[k][i]);
            os << line;
        }
    }
}

}  // namespace smch
