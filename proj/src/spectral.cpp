#include "smch/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "smch/errors.hpp"

namespace smch {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

using cplx = std::complex<double>;

}  // namespace

struct SpectralEngine::Plans {
    std::size_t n;
    double* real_n = nullptr;
    fftw_complex* cplx_n = nullptr;
    double* real_2n = nullptr;
    fftw_complex* cplx_2n = nullptr;
    fftw_plan fwd_n{}, inv_n{}, fwd_2n{}, inv_2n{};

    explicit Plans(std::size_t size) : n(size) {
        std::lock_guard lock(planner_mutex());
        real_n = fftw_alloc_real(n);
        cplx_n = fftw_alloc_complex(n / 2 + 1);
        real_2n = fftw_alloc_real(2 * n);
        cplx_2n = fftw_alloc_complex(n + 1);
        const int ni = static_cast<int>(n);
        fwd_n = fftw_plan_dft_r2c_1d(ni, real_n, cplx_n, FFTW_ESTIMATE);
        inv_n = fftw_plan_dft_c2r_1d(ni, cplx_n, real_n, FFTW_ESTIMATE);
        fwd_2n = fftw_plan_dft_r2c_1d(2 * ni, real_2n, cplx_2n, FFTW_ESTIMATE);
        inv_2n = fftw_plan_dft_c2r_1d(2 * ni, cplx_2n, real_2n, FFTW_ESTIMATE);
    }

    ~Plans() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd_n);
        fftw_destroy_plan(inv_n);
        fftw_destroy_plan(fwd_2n);
        fftw_destroy_plan(inv_2n);
        fftw_free(real_n);
        fftw_free(cplx_n);
        fftw_free(real_2n);
        fftw_free(cplx_2n);
    }
};

SpectralEngine::SpectralEngine(const GridSpec& grid)
    : grid_(make_grid(grid.n, grid.half_length)), k_(grid.n / 2 + 1),
      plans_(std::make_unique<Plans>(grid.n)) {
    for (std::size_t j = 0; j < k_.size(); ++j) k_[j] = grid_.wavenumber(j);
}

SpectralEngine::~SpectralEngine() = default;

Spectrum SpectralEngine::forward(const Field& f) {
    if (!(f.grid() == grid_)) throw ConfigError("spectral engine grid mismatch");
    auto vals = f.values();
    std::copy(vals.begin(), vals.end(), plans_->real_n);
    fftw_execute(plans_->fwd_n);
    Spectrum c(modes());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = {plans_->cplx_n[j][0], plans_->cplx_n[j][1]};
    return c;
}

Field SpectralEngine::inverse(const Spectrum& c) {
    const std::size_t n = grid_.n;
    for (std::size_t j = 0; j < c.size(); ++j) {
        plans_->cplx_n[j][0] = c[j].real();
        plans_->cplx_n[j][1] = c[j].imag();
    }
    // c2r ignores these, but a real-valued field needs them real.
    plans_->cplx_n[0][1] = 0.0;
    plans_->cplx_n[n / 2][1] = 0.0;
    fftw_execute(plans_->inv_n);
    Field out(grid_);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = plans_->real_n[j] * scale;
    return out;
}

std::vector<double> SpectralEngine::to_padded(const Spectrum& c) {
    const std::size_t n = grid_.n;
    for (std::size_t j = 0; j <= n; ++j) {
        plans_->cplx_2n[j][0] = 0.0;
        plans_->cplx_2n[j][1] = 0.0;
    }
    for (std::size_t j = 0; j < n / 2; ++j) {
        plans_->cplx_2n[j][0] = c[j].real();
        plans_->cplx_2n[j][1] = c[j].imag();
    }
    plans_->cplx_2n[0][1] = 0.0;
    // The Nyquist cosine splits evenly between +N/2 and -N/2.
    plans_->cplx_2n[n / 2][0] = 0.5 * c[n / 2].real();
    fftw_execute(plans_->inv_2n);
    std::vector<double> out(2 * n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < 2 * n; ++j) out[j] = plans_->real_2n[j] * scale;
    return out;
}

Spectrum SpectralEngine::from_padded(std::span<const double> padded) {
    const std::size_t n = grid_.n;
    if (padded.size() != 2 * n) throw ConfigError("padded buffer has the wrong length");
    std::copy(padded.begin(), padded.end(), plans_->real_2n);
    fftw_execute(plans_->fwd_2n);
    Spectrum c(modes(), cplx{0.0, 0.0});
    for (std::size_t j = 0; j < n / 2; ++j) {
        c[j] = 0.5 * cplx{plans_->cplx_2n[j][0], plans_->cplx_2n[j][1]};
    }
    return c;
}

double SpectralEngine::interpolate(const Spectrum& c, double x) const {
    const std::size_t n = grid_.n;
    const double s = x + grid_.half_length;
    const double k1 = k_[1];
    double acc = c[0].real();
    cplx phase{1.0, 0.0};
    const cplx step = std::polar(1.0, k1 * s);
    for (std::size_t j = 1; j < n / 2; ++j) {
        // Refresh the phasor periodically to stop drift in the recurrence.
        phase = (j % 64 == 0) ? std::polar(1.0, k_[j] * s) : phase * step;
        acc += 2.0 * (c[j].real() * phase.real() - c[j].imag() * phase.imag());
    }
    acc += c[n / 2].real() * std::cos(k_[n / 2] * s);
    return acc / static_cast<double>(n);
}

SpectralEngine& engine_for(const GridSpec& grid) {
    thread_local std::map<std::pair<std::size_t, double>, std::unique_ptr<SpectralEngine>> cache;
    auto key = std::make_pair(grid.n, grid.half_length);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::make_unique<SpectralEngine>(grid)).first;
    }
    return *it->second;
}

namespace {

Field filtered(const Field& f, const char* what, auto&& mult) {
    f.require_finite(what);
    auto& eng = engine_for(f.grid());
    return eng.inverse(apply_multiplier(eng.forward(f), eng.wavenumbers(), mult));
}

}  // namespace

Field derivative(const Field& f) {
    const double k_nyq = f.grid().max_wavenumber();
    return filtered(f, "derivative input", [k_nyq](double k) {
        return k == k_nyq ? cplx{0.0, 0.0} : cplx{0.0, k};
    });
}

Field second_derivative(const Field& f) {
    return filtered(f, "second_derivative input", [](double k) { return cplx{-k * k, 0.0}; });
}

Field helmholtz_solve(const Field& m) {
    return filtered(m, "helmholtz_solve input", [](double k) { return cplx{1.0 / (1.0 + k * k), 0.0}; });
}

Field helmholtz_apply(const Field& u) {
    return filtered(u, "helmholtz_apply input", [](double k) { return cplx{1.0 + k * k, 0.0}; });
}

Field convolve_p(const Field& f) { return helmholtz_solve(f); }

Field convolve_p_x(const Field& f) {
    const double k_nyq = f.grid().max_wavenumber();
    return filtered(f, "convolve_p_x input", [k_nyq](double k) {
        return k == k_nyq ? cplx{0.0, 0.0} : cplx{0.0, k / (1.0 + k * k)};
    });
}

namespace {

// Per-cell exponentially weighted integrals of the trigonometric interpolant.
// forward_cells: l_j = int_{x_j}^{x_{j+1}} exp(-(x_{j+1}-y)) f(y) dy
// backward_cells: r_j = int_{x_j}^{x_{j+1}} exp(-(y-x_j)) f(y) dy
Field cell_integrals(const Field& f, bool forward_cells) {
    auto& eng = engine_for(f.grid());
    const double h = f.grid().spacing();
    const double eh = std::exp(-h);
    const double k_nyq = f.grid().max_wavenumber();
    auto weight = [&](double k) {
        const cplx ik{0.0, k};
        cplx w = forward_cells ? (std::exp(ik * h) - eh) / (1.0 + ik)
                               : (1.0 - eh * std::exp(ik * h)) / (1.0 - ik);
        return k == k_nyq ? cplx{w.real(), 0.0} : w;
    };
    return eng.inverse(apply_multiplier(eng.forward(f), eng.wavenumbers(), weight));
}

}  // namespace

Field convolve_p_plus(const Field& f) {
    f.require_finite("convolve_p_plus input");
    const std::size_t n = f.grid().n;
    const double eh = std::exp(-f.grid().spacing());
    const Field cells = cell_integrals(f, true);
    // One sweep over a full period from zero, then close the image series.
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc = eh * acc + cells[j];
    const double start = acc / (1.0 - std::exp(-f.grid().period()));
    Field out(f.grid());
    out[0] = start;
    for (std::size_t j = 0; j + 1 < n; ++j) out[j + 1] = eh * out[j] + cells[j];
    return 0.5 * std::move(out);
}

Field convolve_p_minus(const Field& f) {
    f.require_finite("convolve_p_minus input");
    const std::size_t n = f.grid().n;
    const double eh = std::exp(-f.grid().spacing());
    const Field cells = cell_integrals(f, false);
    double acc = 0.0;
    for (std::size_t j = n; j-- > 0;) acc = eh * acc + cells[j];
    const double wrap = acc / (1.0 - std::exp(-f.grid().period()));
    Field out(f.grid());
    double next = wrap;
    for (std::size_t j = n; j-- > 0;) {
        out[j] = eh * next + cells[j];
        next = out[j];
    }
    return 0.5 * std::move(out);
}

Field dealiased_product(const Field& a, const Field& b) {
    require_same_grid(a, b, "dealiased_product");
    auto& eng = engine_for(a.grid());
    auto pa = eng.to_padded(eng.forward(a));
    auto pb = eng.to_padded(eng.forward(b));
    for (std::size_t j = 0; j < pa.size(); ++j) pa[j] *= pb[j];
    return eng.inverse(eng.from_padded(pa));
}

double interpolate(const Field& f, double x) {
    auto& eng = engine_for(f.grid());
    return eng.interpolate(eng.forward(f), x);
}

double sobolev_norm(const Field& f, double s) {
    f.require_finite("sobolev_norm input");
    auto& eng = engine_for(f.grid());
    const Spectrum c = eng.forward(f);
    const auto& k = eng.wavenumbers();
    const std::size_t n = f.grid().n;
    double acc = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const double mult = (j == 0 || j == n / 2) ? 1.0 : 2.0;
        acc += mult * std::pow(1.0 + k[j] * k[j], s) * std::norm(c[j]);
    }
    const double nn = static_cast<double>(n);
    return std::sqrt(acc * f.grid().period() / (nn * nn));
}

}  // namespace smch
