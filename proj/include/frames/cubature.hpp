#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "frames/lattice.hpp"
#include "frames/spectral_fn.hpp"

namespace frames {

struct CubatureRule {
    std::vector<Point> nodes;
    std::vector<double> weights;
    double band = 0.0;          // exact on eigenfunctions with lambda <= band
    double residual = 0.0;      // max moment error on the real basis
    double r = 0.0;             // lattice radius
    int dimension = 0;
    double volume = 0.0;
    std::size_t moment_count = 0;
    double min_weight = 0.0;
    double max_weight = 0.0;
    double c1 = 0.0;            // min weight / r^n
    double c2 = 0.0;            // max weight / r^n
    double condition = 0.0;     // condition estimate of the moment Gram matrix
    double correction = 0.0;    // max |mu - w| / max w
    double calibrated_a = std::numeric_limits<double>::quiet_NaN();
};

// mu = w + S^T (S S^T)^{-1} (m - S w) with w the cell measures and S the real
// eigenbasis up to omega sampled at the lattice.
CubatureRule solve_weights(const SpectralModel& model, const Lattice& lattice, const CellCover& cells, double omega);

// Lattice at r = a/omega, cells, and weights in one call.
CubatureRule build_cubature(const SpectralModel& model, double omega, double a, std::uint64_t seed);

struct Calibration {
    double a = 0.0;       // largest tested r*omega with positive weights
    double a_fail = 0.0;  // smallest tested r*omega that failed (0 if none)
    int evaluations = 0;
};

// Bisection on a = r*omega in [a_lo, a_hi]; a_lo must succeed.
Calibration calibrate_rate(const SpectralModel& model, double omega, std::uint64_t seed, double a_lo, double a_hi, int iterations);

struct DiscreteCoefficients {
    SpectralFn coeffs;
    bool exact = true;           // rule band covers the product band
    double required_band = 0.0;
    double rule_band = 0.0;
    double rule_residual = 0.0;
};

// c_l = sum_k mu_k f(x_k) conj(u_l(x_k)) for lambda_l <= band; f_band defaults to band.
DiscreteCoefficients discrete_fourier_coeffs(const ModelPtr& model, const CubatureRule& rule, std::span<const Complex> samples,
                                             double band, double f_band = -1.0);

// Moments of the first count real basis functions by the model's quadrature.
Eigen::VectorXd real_moments(const SpectralModel& model, std::size_t count);

// count x K matrix of the real basis at the points.
Eigen::MatrixXd real_sampling_matrix(const SpectralModel& model, std::span<const Point> points, std::size_t count);

}  // namespace frames
