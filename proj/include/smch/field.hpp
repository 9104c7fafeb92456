#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smch {

/// Periodic grid on [-L, L) with n points, x_j = -L + j * 2L/n.
struct GridSpec {
    std::size_t n = 0;
    double half_length = 0.0;

    double spacing() const { return 2.0 * half_length / static_cast<double>(n); }
    double x(std::size_t j) const { return -half_length + static_cast<double>(j) * spacing(); }
    double period() const { return 2.0 * half_length; }
    /// Angular wavenumber of Fourier index j (0 <= j <= n/2).
    double wavenumber(std::size_t j) const;
    /// Largest resolved wavenumber (the Nyquist wavenumber).
    double max_wavenumber() const { return wavenumber(n / 2); }

    bool operator==(const GridSpec&) const = default;
};

/// Throws ConfigError unless n is a power of two >= 16 and L > 0.
GridSpec make_grid(std::size_t n, double half_length);

std::vector<double> grid_points(const GridSpec& grid);

/// Samples of a real function on a GridSpec.
class Field {
public:
    Field() = default;
    explicit Field(const GridSpec& grid);
    Field(const GridSpec& grid, std::vector<double> values);

    template <typename F>
    static Field sample(const GridSpec& grid, F&& f) {
        Field out(grid);
        for (std::size_t j = 0; j < grid.n; ++j) out.values_[j] = f(grid.x(j));
        return out;
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t j) const { return values_[j]; }
    double& operator[](std::size_t j) { return values_[j]; }

    bool all_finite() const;
    /// Throws NumericError naming `what` when a sample is NaN/Inf.
    void require_finite(const char* what) const;

    double max_abs() const;
    double min() const;
    double max() const;
    /// Grid quadrature (sum |f|^p h)^(1/p).
    double lp_norm(double p) const;
    double l2_norm() const { return lp_norm(2.0); }
    double integral() const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double c);
    /// this += c * other
    Field& axpy(double c, const Field& other);

private:
    GridSpec grid_{};
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double c, Field a);
/// Pointwise product without dealiasing.
Field pointwise_product(const Field& a, const Field& b);

/// Throws ConfigError when the grids differ.
void require_same_grid(const Field& a, const Field& b, const char* what);

}  // namespace smch
