#pragma once

#include <vector>

namespace frames {

struct GaussLegendreRule {
    std::vector<double> nodes;    // ascending in (-1, 1)
    std::vector<double> weights;  // positive, sum 2
};

// n-point Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2n-1.
GaussLegendreRule gauss_legendre(int n);

// Legendre polynomial P_n(x) by the three-term recurrence.
double legendre_p(int n, double x);

}  // namespace frames
