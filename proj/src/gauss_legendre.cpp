#include "frames/gauss_legendre.hpp"

#include <cmath>
#include <stdexcept>

#include "frames/common.hpp"

namespace frames {

namespace {

// Returns P_n(x) and P_n'(x).
std::pair<double, double> legendre_with_derivative(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if (n == 0) return {1.0, 0.0};
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

double legendre_p(int n, double x) {
    if (n == 0) return 1.0;
    return legendre_with_derivative(n, x).first;
}

GaussLegendreRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    GaussLegendreRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess for the i-th largest root.
        const double th = kPi * (4.0 * i + 3.0) / (4.0 * n + 2.0);
        double x = std::cos(th) * (1.0 - (n - 1.0) / (8.0 * n * n * n));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            const auto [p, d] = legendre_with_derivative(n, x);
            dp = d;
            const double dx = p / d;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        dp = legendre_with_derivative(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
        rule.nodes[i] = -x;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace frames
