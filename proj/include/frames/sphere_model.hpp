#pragma once

#include <vector>

#include "frames/spectral_model.hpp"

namespace frames {

struct SphereConfig {
    int max_degree = 0;       // L_max
    int gauss_latitudes = 1;  // G >= 2 L_max + 1
    int longitudes = 1;       // M >= 4 L_max + 1
};

// Fully normalized associated Legendre values Pbar_l^m(x) for 0 <= m <= l <= L,
// scaled so that Y_l0 = Pbar_l^0 and the real harmonics are sqrt(2) Pbar_l^m
// times cos/sin(m phi). Stored at l(l+1)/2 + m.
class LegendreTable {
public:
    explicit LegendreTable(int max_degree);
    int max_degree() const noexcept { return L_; }
    // Fills out (size (L+1)(L+2)/2) for x = cos(theta), s = sin(theta) >= 0, up to degree lmax <= L.
    void evaluate(double x, double s, int lmax, std::span<double> out) const;
    static std::size_t tri(int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; }
    std::size_t table_size() const { return tri(L_ + 1, 0); }

private:
    int L_;
    std::vector<double> a_;
    std::vector<double> b_;
};

// S^2 with real spherical harmonics, index l^2 + l + m, sqrt(L) eigenvalue sqrt(l(l+1)).
// Quadrature: Gauss-Legendre in cos(theta) times uniform longitudes; node r*M + j.
class SphereModel final : public SpectralModel {
public:
    explicit SphereModel(const SphereConfig& cfg);

    ManifoldKind kind() const override { return ManifoldKind::sphere2; }
    int dimension() const override { return 2; }
    double volume() const override { return 4.0 * kPi; }
    const SphereConfig& config() const noexcept { return cfg_; }

    int degree_of_band(double omega) const override;
    double band_of_degree(int degree) const override;
    std::size_t count_of_degree(int degree) const override;

    void eval_basis(const Point& p, std::span<Complex> out) const override;
    void eval_real_basis(const Point& p, std::span<double> out) const override;
    void check_point(const Point& p) const override;
    Point random_point(std::mt19937_64& rng) const override;
    double zonal_sum(std::span<const double> degree_weights, double cos_angle) const override;

    VectorXc synthesize_nodes(const VectorXc& coeffs) const override;
    VectorXc analyze_nodes(const VectorXc& values, std::size_t count) const override;
    Eigen::VectorXd real_basis_moments(std::size_t count) const override;

    // Y_{l,m}(p) for l <= L_max.
    double harmonic(int l, int m, const Point& p) const;
    static std::size_t index_of(int l, int m) { return static_cast<std::size_t>(l * l + l + m); }

    const std::vector<double>& ring_cos() const noexcept { return ring_x_; }

private:
    void fill_real(const Point& p, int lmax, std::span<double> out) const;

    SphereConfig cfg_;
    LegendreTable table_;
    std::vector<double> ring_x_;
    std::vector<double> ring_s_;
    std::vector<double> ring_w_;
};

ModelPtr make_sphere_model(const SphereConfig& cfg);

// Smallest valid quadrature for degree L: G = 2L+1, M = 4L+1.
SphereConfig minimal_sphere_config(int max_degree);

// Y_{l,m}(p) for any l >= 0, |m| <= l; throws DomainError off the unit sphere.
double eval_sph_harm(int l, int m, const Point& p);

}  // namespace frames
