#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "smch/field.hpp"

namespace smch {

/// Half-complex spectrum of a real field: n/2+1 unnormalized r2c coefficients.
using Spectrum = std::vector<std::complex<double>>;

/// FFT plans and scratch for one grid. Not thread-safe; use one engine per thread
/// (engine_for() hands out thread-local instances).
class SpectralEngine {
public:
    explicit SpectralEngine(const GridSpec& grid);
    ~SpectralEngine();
    SpectralEngine(const SpectralEngine&) = delete;
    SpectralEngine& operator=(const SpectralEngine&) = delete;

    const GridSpec& grid() const { return grid_; }
    std::size_t modes() const { return grid_.n / 2 + 1; }
    /// Angular wavenumbers of the n/2+1 stored modes.
    const std::vector<double>& wavenumbers() const { return k_; }

    Spectrum forward(const Field& f);
    Field inverse(const Spectrum& c);

    /// Zero-padded evaluation on the 2n-point grid (same interval).
    std::vector<double> to_padded(const Spectrum& c);
    /// Project samples on the 2n-point grid back onto the resolved modes.
    /// The Nyquist mode of the result is zeroed.
    Spectrum from_padded(std::span<const double> padded);

    /// Trigonometric interpolant of the spectrum at an arbitrary x.
    double interpolate(const Spectrum& c, double x) const;

private:
    struct Plans;
    GridSpec grid_;
    std::vector<double> k_;
    std::unique_ptr<Plans> plans_;
};

/// Thread-local engine cache keyed by grid.
SpectralEngine& engine_for(const GridSpec& grid);

/// Multiply a spectrum by a real or complex multiplier of the wavenumber.
template <typename M>
Spectrum apply_multiplier(Spectrum c, const std::vector<double>& k, M&& mult) {
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= mult(k[j]);
    return c;
}

/// Spectral derivative; the Nyquist mode's derivative is zero.
Field derivative(const Field& f);
Field second_derivative(const Field& f);

/// u = (1 - d^2/dx^2)^{-1} m, the multiplier 1/(1+k^2).
Field helmholtz_solve(const Field& m);
/// m = u - u_xx.
Field helmholtz_apply(const Field& u);

/// p * f with p(x) = exp(-|x|)/2; identical to helmholtz_solve.
Field convolve_p(const Field& f);
/// p_x * f = d/dx (p * f).
Field convolve_p_x(const Field& f);
/// One-sided kernels p_+(x) = exp(-x)/2 for x > 0 and p_-(x) = exp(x)/2 for x < 0,
/// evaluated as cumulative sums of exact per-cell integrals of the trigonometric
/// interpolant, with the periodic image sum closed in geometric form.
Field convolve_p_plus(const Field& f);
Field convolve_p_minus(const Field& f);

/// Product of two fields evaluated on the 2n-point padded grid and projected back.
Field dealiased_product(const Field& a, const Field& b);

/// Value of the trigonometric interpolant of f at x.
double interpolate(const Field& f, double x);

/// Spectral H^s norm (sum (1+k^2)^s |f_k|^2 * 2L)^{1/2}, f_k normalized coefficients.
double sobolev_norm(const Field& f, double s);

}  // namespace smch
