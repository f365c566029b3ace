#include "frames/circle_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace frames {

CircleModel::CircleModel(const CircleConfig& cfg) : cfg_(cfg) {
    if (cfg.max_degree < 0) throw ConfigError("circle: max_degree must be >= 0");
    if (cfg.quadrature_size < 4 * cfg.max_degree + 1)
        throw ConfigError("circle: quadrature_size must be >= 4*max_degree+1 (got " +
                          std::to_string(cfg.quadrature_size) + ")");
    const std::size_t n = 2 * static_cast<std::size_t>(cfg.max_degree) + 1;
    eigenvalues_.resize(n);
    degrees_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int k = std::abs(frequency(i));
        eigenvalues_[i] = k;
        degrees_[i] = k;
    }
    const int N = cfg.quadrature_size;
    nodes_.resize(N);
    weights_.assign(N, 2.0 * kPi / N);
    for (int j = 0; j < N; ++j) nodes_[j] = circle_point(2.0 * kPi * j / N);
    exact_degree_ = N - 1;
}

int CircleModel::frequency(std::size_t index) {
    if (index == 0) return 0;
    const int k = static_cast<int>((index + 1) / 2);
    return (index % 2 == 1) ? -k : k;
}

std::size_t CircleModel::index_of(int k) {
    if (k == 0) return 0;
    return k < 0 ? static_cast<std::size_t>(2 * (-k) - 1) : static_cast<std::size_t>(2 * k);
}

int CircleModel::degree_of_band(double omega) const {
    if (omega < 0.0) return -1;
    return static_cast<int>(std::floor(omega + 1e-12));
}

std::size_t CircleModel::count_of_degree(int degree) const {
    if (degree < 0) return 0;
    return 2 * static_cast<std::size_t>(degree) + 1;
}

void CircleModel::eval_basis(const Point& p, std::span<Complex> out) const {
    if (out.size() > size()) throw TruncationError("circle: index beyond model basis");
    const double theta = std::atan2(p.y, p.x);
    const double s = 1.0 / std::sqrt(2.0 * kPi);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double a = frequency(i) * theta;
        out[i] = Complex(s * std::cos(a), s * std::sin(a));
    }
}

void CircleModel::eval_real_basis(const Point& p, std::span<double> out) const {
    if (out.size() > size()) throw TruncationError("circle: index beyond model basis");
    const double theta = std::atan2(p.y, p.x);
    const double s0 = 1.0 / std::sqrt(2.0 * kPi);
    const double s1 = 1.0 / std::sqrt(kPi);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int k = frequency(i);
        if (k == 0)
            out[i] = s0;
        else if (k < 0)
            out[i] = s1 * std::sin(-k * theta);
        else
            out[i] = s1 * std::cos(k * theta);
    }
}

void CircleModel::check_point(const Point& p) const {
    if (std::abs(p.z) > 1e-12 || std::abs(p.x * p.x + p.y * p.y - 1.0) > 1e-12)
        throw DomainError("point is not on the unit circle");
}

Point CircleModel::random_point(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    return circle_point(u(rng));
}

double CircleModel::zonal_sum(std::span<const double> w, double c) const {
    if (w.empty()) return 0.0;
    c = std::clamp(c, -1.0, 1.0);
    // Z_0 = 1/(2 pi), Z_d = T_d(c)/pi with Chebyshev T_d.
    double s = w[0] * 0.5;
    double t0 = 1.0;
    double t1 = c;
    for (std::size_t d = 1; d < w.size(); ++d) {
        s += w[d] * t1;
        const double t2 = 2.0 * c * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    return s / kPi;
}

ModelPtr make_circle_model(const CircleConfig& cfg) { return std::make_shared<CircleModel>(cfg); }

}  // namespace frames
