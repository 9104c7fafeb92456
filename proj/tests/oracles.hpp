#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "smch/field.hpp"

// Test-side reference values computed without the library's spectral machinery.
namespace oracle {

// Convolutions of the line kernels with f(y) = exp(-y^2):
//   p+ * f (x) = 1/2 int_{-inf}^x e^{-(x-y)} f(y) dy
//   p- * f (x) = 1/2 int_x^{inf}  e^{(x-y)}  f(y) dy
inline double gauss_p_plus(double x) {
    return 0.25 * std::sqrt(M_PI) * std::exp(0.25 - x) * std::erfc(0.5 - x);
}
inline double gauss_p_minus(double x) {
    return 0.25 * std::sqrt(M_PI) * std::exp(0.25 + x) * std::erfc(0.5 + x);
}
inline double gauss_p(double x) { return gauss_p_plus(x) + gauss_p_minus(x); }

// A band-limited field given by explicit cosine/sine coefficients on modes 1..J,
// with closed-form derivatives and Helmholtz inverse.
struct Trig {
    double L = 1.0;
    double a0 = 0.0;
    std::vector<int> modes;
    std::vector<double> a, b;

    double k(std::size_t i) const { return M_PI * modes[i] / L; }
    // d-th derivative of the series, divided termwise by (1+k^2)^e.
    double eval(double x, int d = 0, int e = 0) const {
        double s = (d == 0) ? a0 : 0.0;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const double kk = k(i);
            const double ph = kk * (x + L);
            double c = a[i], sn = b[i];
            // derivative cycles cos -> -sin -> -cos -> sin
            double val;
            switch (d % 4) {
                case 0: val = c * std::cos(ph) + sn * std::sin(ph); break;
                case 1: val = -c * std::sin(ph) + sn * std::cos(ph); break;
                case 2: val = -c * std::cos(ph) - sn * std::sin(ph); break;
                default: val = c * std::sin(ph) - sn * std::cos(ph); break;
            }
            s += val * std::pow(kk, d) / std::pow(1.0 + kk * kk, e);
        }
        return s;
    }
    smch::Field field(const smch::GridSpec& g, int d = 0, int e = 0) const {
        return smch::Field::sample(g, [&](double x) { return eval(x, d, e); });
    }
};

inline Trig random_trig(std::mt19937_64& rng, double L, int max_mode, int count) {
    std::uniform_int_distribution<int> pick(1, max_mode);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    Trig t;
    t.L = L;
    t.a0 = amp(rng);
    for (int i = 0; i < count; ++i) {
        t.modes.push_back(pick(rng));
        t.a.push_back(amp(rng));
        t.b.push_back(amp(rng));
    }
    return t;
}

// Sum of Gaussians centred in |x| <= 4 with widths in [0.5, 1]: below 1e-15 beyond |x| = 10.
inline smch::Field random_bumps(std::mt19937_64& rng, const smch::GridSpec& g, int count = 4) {
    std::uniform_real_distribution<double> c(-4.0, 4.0), w(0.5, 1.0), a(-1.0, 1.0);
    std::vector<double> cs, ws, as;
    for (int i = 0; i < count; ++i) {
        cs.push_back(c(rng));
        ws.push_back(w(rng));
        as.push_back(a(rng));
    }
    return smch::Field::sample(g, [&](double x) {
        double s = 0.0;
        for (int i = 0; i < count; ++i) s += as[i] * std::exp(-std::pow((x - cs[i]) / ws[i], 2));
        return s;
    });
}

inline double max_diff(const smch::Field& a, const smch::Field& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

}  // namespace oracle
