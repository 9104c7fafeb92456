#include "smch/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "smch/errors.hpp"

namespace smch {

double GridSpec::wavenumber(std::size_t j) const {
    return std::numbers::pi * static_cast<double>(j) / half_length;
}

GridSpec make_grid(std::size_t n, double half_length) {
    if (n < 16 || (n & (n - 1)) != 0) {
        throw ConfigError("grid.n must be a power of two >= 16, got " + std::to_string(n));
    }
    if (!(half_length > 0.0) || !std::isfinite(half_length)) {
        throw ConfigError("grid.L must be positive and finite");
    }
    return GridSpec{n, half_length};
}

std::vector<double> grid_points(const GridSpec& grid) {
    std::vector<double> xs(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) xs[j] = grid.x(j);
    return xs;
}

Field::Field(const GridSpec& grid) : grid_(grid), values_(grid.n, 0.0) {}

Field::Field(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.n) {
        throw ConfigError("field has " + std::to_string(values_.size()) +
                          " samples but grid has " + std::to_string(grid_.n));
    }
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void Field::require_finite(const char* what) const {
    if (!all_finite()) throw NumericError(std::string("non-finite samples in ") + what);
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::lp_norm(double p) const {
    if (std::isinf(p)) return max_abs();
    double s = 0.0;
    for (double v : values_) s += std::pow(std::abs(v), p);
    return std::pow(s * grid_.spacing(), 1.0 / p);
}

double Field::integral() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * grid_.spacing();
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(*this, other, "field addition");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(*this, other, "field subtraction");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
    return *this;
}

Field& Field::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

Field& Field::axpy(double c, const Field& other) {
    require_same_grid(*this, other, "field axpy");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += c * other.values_[j];
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double c, Field a) { return a *= c; }

Field pointwise_product(const Field& a, const Field& b) {
    require_same_grid(a, b, "pointwise product");
    Field out(a.grid());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * b[j];
    return out;
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (!(a.grid() == b.grid()) || a.size() != b.size()) {
        throw ConfigError(std::string("grid mismatch in ") + what);
    }
}

}  // namespace smch
