#pragma once

#include <span>

#include "frames/spectral_fn.hpp"

namespace frames {

// Smooth dyadic partition: g = 1 on [0,1], 0 on [2, inf), exp-blend between;
// h(x) = g(x) - g(2x); G_0 = g, G_j(x) = h(2^-j x); F_j = sqrt(G_j).
class FilterBank {
public:
    explicit FilterBank(int levels);

    int levels() const noexcept { return J_; }

    static double psi(double t);
    static double g(double x);
    static double h(double x);

    double G(int j, double x) const;
    double F(int j, double x) const;
    // sum_{j <= J} G_j(x)
    double partial_sum(double x) const;

    // Spectral support of level j: [0, 2] for j = 0, [2^{j-1}, 2^{j+1}] otherwise.
    static double band_lo(int j);
    static double band_hi(int j);

    Multiplier filter(int j) const;
    Multiplier squared_filter(int j) const;

private:
    int J_;
};

// max over grid of |sum_{j <= J} G_j - g(2^-J x)|.
double partition_residual(const FilterBank& bank, std::span<const double> grid);

}  // namespace frames
