#pragma once

#include <limits>
#include <vector>

#include "smch/field.hpp"

namespace smch {

/// Encodes p = infinity or r = infinity for besov_norm.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Smooth dyadic partition of unity on the grid's resolved wavenumbers.
///
/// chi is a radial cutoff equal to 1 on |xi| <= 4/3 (1 - delta) and 0 beyond
/// 4/3 (1 + delta); phi(xi) = chi(xi/2) - chi(xi), so block q is supported in
/// 2^q [4/3 (1 - delta), 8/3 (1 + delta)] and the sum telescopes to 1.
struct DyadicPartition {
    GridSpec grid;
    double delta = 0.05;
    int max_q = 0;
    /// chi evaluated at each stored mode j = 0..n/2.
    std::vector<double> chi;
    /// phi_blocks[q][j] = phi(2^{-q} k_j) for q = 0..max_q.
    std::vector<std::vector<double>> phi_blocks;

    double chi_profile(double xi) const;
    double phi_profile(double xi) const;
    /// Multiplier of block q (q = -1 is chi) at wavenumber xi.
    double block_profile(int q, double xi) const;
    /// Multiplier of block q at stored mode j.
    double block_at_mode(int q, std::size_t j) const;
};

DyadicPartition build_partition(const GridSpec& grid, double delta = 0.05);

/// Delta_q f for -1 <= q <= max_q.
Field dyadic_block(const Field& f, int q, const DyadicPartition& P);
/// S_q f = sum_{q' <= q-1} Delta_{q'} f. Any q >= -1 is accepted; q > max_q yields f.
Field low_freq_sum(const Field& f, int q, const DyadicPartition& P);
/// All blocks Delta_{-1} .. Delta_{max_q}; element i holds block q = i - 1.
std::vector<Field> all_blocks(const Field& f, const DyadicPartition& P);

/// Discrete B^s_{p,r} norm; p and r in [1, inf] with kInfinity for inf.
double besov_norm(const Field& f, double s, double p, double r, const DyadicPartition& P);

}  // namespace smch
