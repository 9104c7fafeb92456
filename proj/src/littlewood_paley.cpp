#include "smch/littlewood_paley.hpp"

#include <cmath>
#include <string>

#include "smch/errors.hpp"
#include "smch/spectral.hpp"

namespace smch {

namespace {

// exp(-1/(1-s^2)) on [0,1), the standard mollifier profile.
double mollifier(double s) {
    if (s >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

// Smooth monotone step from 1 (s <= 0) to 0 (s >= 1), flat at both ends.
double smooth_step_down(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    const double a = mollifier(s);
    const double b = mollifier(1.0 - s);
    return a / (a + b);
}

}  // namespace

double DyadicPartition::chi_profile(double xi) const {
    const double lo = 4.0 / 3.0 * (1.0 - delta);
    const double hi = 4.0 / 3.0 * (1.0 + delta);
    return smooth_step_down((std::abs(xi) - lo) / (hi - lo));
}

double DyadicPartition::phi_profile(double xi) const {
    return chi_profile(0.5 * xi) - chi_profile(xi);
}

double DyadicPartition::block_profile(int q, double xi) const {
    if (q < -1) return 0.0;
    if (q == -1) return chi_profile(xi);
    return phi_profile(std::ldexp(xi, -q));
}

double DyadicPartition::block_at_mode(int q, std::size_t j) const {
    if (q == -1) return chi[j];
    return phi_blocks[static_cast<std::size_t>(q)][j];
}

DyadicPartition build_partition(const GridSpec& grid, double delta) {
    if (!(delta > 0.0 && delta < 1.0 / 6.0)) {
        throw ConfigError("partition smoothing width must lie in (0, 1/6)");
    }
    DyadicPartition P;
    P.grid = make_grid(grid.n, grid.half_length);
    P.delta = delta;
    const double flat_edge = 4.0 / 3.0 * (1.0 - delta);
    const double k_max = grid.max_wavenumber();
    // Smallest Q with S_{Q+1} = 1 on every resolved wavenumber.
    int q = 0;
    while (std::ldexp(flat_edge, q + 1) < k_max) ++q;
    P.max_q = q;

    const std::size_t modes = grid.n / 2 + 1;
    P.chi.resize(modes);
    P.phi_blocks.assign(static_cast<std::size_t>(P.max_q + 1), std::vector<double>(modes));
    for (std::size_t j = 0; j < modes; ++j) {
        const double k = grid.wavenumber(j);
        P.chi[j] = P.chi_profile(k);
        for (int b = 0; b <= P.max_q; ++b) P.phi_blocks[static_cast<std::size_t>(b)][j] = P.block_profile(b, k);
    }
    return P;
}

namespace {

void require_partition_grid(const Field& f, const DyadicPartition& P) {
    if (!(f.grid() == P.grid)) throw ConfigError("field and partition live on different grids");
}

}  // namespace

Field dyadic_block(const Field& f, int q, const DyadicPartition& P) {
    require_partition_grid(f, P);
    if (q < -1 || q > P.max_q) {
        throw ConfigError("dyadic block index " + std::to_string(q) + " outside [-1, " +
                          std::to_string(P.max_q) + "]");
    }
    f.require_finite("dyadic_block input");
    auto& eng = engine_for(f.grid());
    Spectrum c = eng.forward(f);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= P.block_at_mode(q, j);
    return eng.inverse(c);
}

Field low_freq_sum(const Field& f, int q, const DyadicPartition& P) {
    require_partition_grid(f, P);
    if (q < -1) throw ConfigError("low_freq_sum index must be >= -1");
    f.require_finite("low_freq_sum input");
    auto& eng = engine_for(f.grid());
    Spectrum c = eng.forward(f);
    const int top = std::min(q - 1, P.max_q);
    for (std::size_t j = 0; j < c.size(); ++j) {
        double w = 0.0;
        for (int b = -1; b <= top; ++b) w += P.block_at_mode(b, j);
        c[j] *= w;
    }
    return eng.inverse(c);
}

std::vector<Field> all_blocks(const Field& f, const DyadicPartition& P) {
    require_partition_grid(f, P);
    f.require_finite("all_blocks input");
    auto& eng = engine_for(f.grid());
    const Spectrum c = eng.forward(f);
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(P.max_q + 2));
    for (int q = -1; q <= P.max_q; ++q) {
        Spectrum cq = c;
        for (std::size_t j = 0; j < cq.size(); ++j) cq[j] *= P.block_at_mode(q, j);
        out.push_back(eng.inverse(cq));
    }
    return out;
}

double besov_norm(const Field& f, double s, double p, double r, const DyadicPartition& P) {
    auto valid_index = [](double v) { return v == kInfinity || (std::isfinite(v) && v >= 1.0); };
    if (!valid_index(p) || !valid_index(r)) throw ConfigError("Besov indices p, r must lie in [1, inf]");
    if (!std::isfinite(s)) throw ConfigError("Besov regularity s must be finite");
    const auto blocks = all_blocks(f, P);
    double acc = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const int q = static_cast<int>(i) - 1;
        const double term = std::pow(2.0, q * s) * blocks[i].lp_norm(p);
        if (r == kInfinity) {
            acc = std::max(acc, term);
        } else {
            acc += std::pow(term, r);
        }
    }
    return r == kInfinity ? acc : std::pow(acc, 1.0 / r);
}

}  // namespace smch
