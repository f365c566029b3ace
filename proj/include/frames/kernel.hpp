#pragma once

#include <random>
#include <vector>

#include "frames/filter_bank.hpp"
#include "frames/spectral_fn.hpp"

namespace frames {

// Throws TruncationError when F(t lambda) is nonzero past the model's spectrum.
void check_kernel_support(const SpectralModel& model, const Multiplier& F, double t);

// K_t(x, y) = sum_l F(t lambda_l) u_l(x) conj(u_l(y)), summed by degree blocks.
Complex kernel_eval(const SpectralModel& model, const Multiplier& F, double t, const Point& x, const Point& y);

// K_t(x, .) at every quadrature node.
GridFn kernel_nodes(const ModelPtr& model, const Multiplier& F, double t, const Point& x);

struct KernelProfile {
    double t = 0.0;
    Point center;
    int N = 0;
    double peak = 0.0;             // |K(x, x)|
    double normalized_peak = 0.0;  // |K(x, x)| t^n
    double envelope = 0.0;         // max over nodes of |K| t^n (1 + d/t)^N
    double far_distance = 0.0;     // node distance closest to pi/2
    double far_value = 0.0;        // |K| there
    std::vector<double> bin_distance;  // upper edge of each distance bin
    std::vector<double> bin_max;       // max |K| inside the bin
};

std::vector<KernelProfile> kernel_decay_profile(const ModelPtr& model, const Multiplier& F, const std::vector<double>& t_list,
                                                const Point& x, int N, int bins = 128);

// Quadrature L_p norm of K_t(x, .); p = infinity is the max over nodes.
double kernel_lp_norm(const ModelPtr& model, const Multiplier& F, double t, double p, const Point& x);

// Least-squares slope of log2(y) against log2(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// ||f - sum_{j <= J} G_j(sqrt L) f||_p on the nodes; requires 2^{J+1} within the spectrum.
double littlewood_paley_residual(const ModelPtr& model, const FilterBank& bank, const GridFn& f, double p, int J);

// G_j(sqrt L) f at the nodes.
GridFn level_block(const ModelPtr& model, const FilterBank& bank, const GridFn& f, int j);

// Real Gaussian coefficients damped by exp(-tau lambda^2) over the whole model spectrum.
SpectralFn heat_smoothed_noise(const ModelPtr& model, double tau, std::mt19937_64& rng);

}  // namespace frames
