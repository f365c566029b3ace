#pragma once

#include "frames/spectral_model.hpp"

namespace frames {

struct CircleConfig {
    int max_degree = 0;       // K_max
    int quadrature_size = 1;  // N >= 4 K_max + 1
};

// S^1 with L = -d^2/dtheta^2 and basis e^{ik theta}/sqrt(2 pi). Index order:
// k = 0, -1, +1, -2, +2, ...
class CircleModel final : public SpectralModel {
public:
    explicit CircleModel(const CircleConfig& cfg);

    ManifoldKind kind() const override { return ManifoldKind::circle; }
    int dimension() const override { return 1; }
    double volume() const override { return 2.0 * kPi; }
    const CircleConfig& config() const noexcept { return cfg_; }

    int degree_of_band(double omega) const override;
    double band_of_degree(int degree) const override { return static_cast<double>(degree); }
    std::size_t count_of_degree(int degree) const override;

    void eval_basis(const Point& p, std::span<Complex> out) const override;
    void eval_real_basis(const Point& p, std::span<double> out) const override;
    void check_point(const Point& p) const override;
    Point random_point(std::mt19937_64& rng) const override;
    double zonal_sum(std::span<const double> degree_weights, double cos_angle) const override;

    // Frequency k of a flat index.
    static int frequency(std::size_t index);
    static std::size_t index_of(int k);

private:
    CircleConfig cfg_;
};

ModelPtr make_circle_model(const CircleConfig& cfg);

}  // namespace frames
