#include <doctest.h>

#include <cmath>
#include <vector>

#include "frames/filter_bank.hpp"

using namespace frames;

namespace {

// Closed form of the exp-blend written as a logistic in 1/(2-x) - 1/(x-1).
double g_oracle(double x) {
    if (x <= 1.0) return 1.0;
    if (x >= 2.0) return 0.0;
    return 1.0 / (1.0 + std::exp(1.0 / (2.0 - x) - 1.0 / (x - 1.0)));
}

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

}  // namespace

TEST_CASE("base bump endpoints and symmetry") {
    CHECK(FilterBank::g(1.0) == 1.0);
    CHECK(FilterBank::g(2.0) == 0.0);
    CHECK(FilterBank::g(1.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(FilterBank::g(0.0) == 1.0);
    CHECK(FilterBank::g(7.0) == 0.0);
    for (double x : grid(1.01, 1.99, 99)) {
        CHECK(std::abs(FilterBank::g(x) - g_oracle(x)) < 1e-14);
        CHECK(std::abs(FilterBank::g(x) + FilterBank::g(3.0 - x) - 1.0) < 1e-14);
    }
}

TEST_CASE("level filters peak at powers of two") {
    const FilterBank bank(8);
    for (int j = 1; j <= 8; ++j) CHECK(bank.G(j, std::ldexp(1.0, j)) == 1.0);
    CHECK(bank.G(0, 0.0) == 1.0);
}

TEST_CASE("sum of squared filters at 3.7") {
    const FilterBank bank(6);
    double s = 0.0;
    for (int j = 0; j <= 6; ++j) s += bank.G(j, 3.7);
    CHECK(std::abs(s - 1.0) <= 1e-14);
}

TEST_CASE("telescoping partition residual") {
    for (int J : {1, 3, 6, 9}) {
        const FilterBank bank(J);
        const auto full = grid(0.0, std::ldexp(1.0, J + 1), 4001);
        CHECK(partition_residual(bank, full) <= 1e-12);
        double mx = 0.0;
        for (double x : grid(0.0, std::ldexp(1.0, J - 1), 2001)) mx = std::max(mx, std::abs(bank.partial_sum(x) - 1.0));
        CHECK(mx <= 1e-12);
        CHECK(bank.partial_sum(std::ldexp(1.0, J + 1)) == 0.0);
    }
}

TEST_CASE("supports, range and monotonicity") {
    const FilterBank bank(6);
    for (double x : grid(0.0, 4.0, 4001)) {
        const double hx = FilterBank::h(x);
        if (x < 0.5 || x > 2.0) CHECK(hx == 0.0);
        CHECK(hx >= -1e-16);
    }
    double prev = 1.0;
    for (double x : grid(0.0, 3.0, 30001)) {
        const double v = FilterBank::g(x);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    for (int j = 0; j <= 6; ++j) {
        for (double x : grid(0.0, 300.0, 6001)) {
            const double f = bank.F(j, x);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            if (x < FilterBank::band_lo(j) || x > FilterBank::band_hi(j)) CHECK(f == 0.0);
        }
    }
    for (double x : grid(0.0, 1.0, 101)) CHECK(bank.F(0, x) == 1.0);
}

TEST_CASE("invalid level count") { CHECK_THROWS_AS(FilterBank(0), PreconditionError); }
