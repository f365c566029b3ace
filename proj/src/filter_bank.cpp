#include "frames/filter_bank.hpp"

#include <algorithm>
#include <cmath>

namespace frames {

FilterBank::FilterBank(int levels) : J_(levels) {
    if (levels < 1) throw PreconditionError("filter bank needs J >= 1");
}

double FilterBank::psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double FilterBank::g(double x) {
    if (x <= 1.0) return 1.0;
    if (x >= 2.0) return 0.0;
    const double a = psi(2.0 - x);
    const double b = psi(x - 1.0);
    return a / (a + b);
}

double FilterBank::h(double x) { return g(x) - g(2.0 * x); }

double FilterBank::G(int j, double x) const {
    if (j < 0) return 0.0;
    if (j == 0) return g(x);
    return h(std::ldexp(x, -j));
}

double FilterBank::F(int j, double x) const { return std::sqrt(std::max(G(j, x), 0.0)); }

double FilterBank::partial_sum(double x) const {
    double s = 0.0;
    for (int j = 0; j <= J_; ++j) s += G(j, x);
    return s;
}

double FilterBank::band_lo(int j) { return j == 0 ? 0.0 : std::ldexp(1.0, j - 1); }

double FilterBank::band_hi(int j) { return std::ldexp(1.0, j + 1); }

Multiplier FilterBank::filter(int j) const {
    return [bank = *this, j](double x) { return Complex(bank.F(j, x)); };
}

Multiplier FilterBank::squared_filter(int j) const {
    return [bank = *this, j](double x) { return Complex(bank.G(j, x)); };
}

double partition_residual(const FilterBank& bank, std::span<const double> grid) {
    double r = 0.0;
    for (double x : grid) r = std::max(r, std::abs(bank.partial_sum(x) - FilterBank::g(std::ldexp(x, -bank.levels()))));
    return r;
}

}  // namespace frames
