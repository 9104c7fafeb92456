#include <doctest.h>

#include <cmath>

#include "smch/errors.hpp"
#include "smch/field.hpp"

using namespace smch;

TEST_CASE("make_grid spacing and origin") {
    const auto g = make_grid(64, 10.0);
    CHECK(g.spacing() == doctest::Approx(0.3125).epsilon(1e-15));
    const auto h = make_grid(16, M_PI);
    CHECK(h.x(0) == -M_PI);
    CHECK(h.x(8) == doctest::Approx(0.0));
}

TEST_CASE("make_grid rejects bad sizes") {
    CHECK_THROWS_AS(make_grid(65, 10.0), ConfigError);
    CHECK_THROWS_AS(make_grid(8, 10.0), ConfigError);
    CHECK_THROWS_AS(make_grid(64, 0.0), ConfigError);
    CHECK_THROWS_AS(make_grid(64, -1.0), ConfigError);
}

TEST_CASE("wavenumbers follow the 2L period") {
    const auto g = make_grid(32, 4.0);
    CHECK(g.wavenumber(3) == doctest::Approx(3 * M_PI / 4.0));
    CHECK(g.max_wavenumber() == doctest::Approx(16 * M_PI / 4.0));
}

TEST_CASE("field norms by grid quadrature") {
    const auto g = make_grid(16, 1.0);
    Field f(g);
    for (std::size_t j = 0; j < g.n; ++j) f[j] = (j % 2 == 0) ? 1.0 : -2.0;
    const double h = g.spacing();
    CHECK(f.max_abs() == 2.0);
    CHECK(f.min() == -2.0);
    CHECK(f.max() == 1.0);
    CHECK(f.integral() == doctest::Approx(8 * h * (1.0 - 2.0)));
    CHECK(f.l2_norm() == doctest::Approx(std::sqrt(8 * h * (1.0 + 4.0))));
    CHECK(f.lp_norm(1.0) == doctest::Approx(8 * h * 3.0));
}

TEST_CASE("non-finite samples are detected") {
    const auto g = make_grid(16, 1.0);
    Field f(g);
    CHECK(f.all_finite());
    f[3] = NAN;
    CHECK_FALSE(f.all_finite());
    CHECK_THROWS_AS(f.require_finite("probe"), NumericError);
}

TEST_CASE("arithmetic requires matching grids") {
    Field a(make_grid(16, 1.0)), b(make_grid(32, 1.0));
    CHECK_THROWS_AS(a += b, ConfigError);
    Field c(make_grid(16, 1.0));
    c[0] = 2.0;
    a.axpy(3.0, c);
    CHECK(a[0] == 6.0);
}
