#pragma once

#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "frames/filter_bank.hpp"
#include "frames/frame.hpp"

namespace frames {

// Orthonormal band-limited basis on R: e_m(x) = sqrt(pi/w0) (1/pi) int_0^inf p(xi) cos(xi (x - m pi/w0)) dxi,
// |m| <= M, with p^2 rolling off from 1 at w0(1-beta) to 0 at w0(1+beta). beta = 0 is the Shannon basis.
struct LineSpace {
    double omega0 = 1.0;
    double beta = 0.5;
    double T = 1.0;  // centers m pi / w0 lie in [-T, T]
    int M = 0;

    // Basis inside PW_band (band_hi = band).
    static LineSpace inner(double band, double T, double beta = 0.5);
    // Basis whose span contains PW_band locally (band_lo = band).
    static LineSpace outer(double band, double T, double beta = 0.5);

    double band_lo() const { return omega0 * (1.0 - beta); }
    double band_hi() const { return omega0 * (1.0 + beta); }
    std::size_t size() const { return static_cast<std::size_t>(2 * M + 1); }
    double spacing() const;
    double center(std::size_t i) const;
    double profile(double xi) const;
    // Length over which basis tails must be sampled.
    double margin() const;
    double sample_half_width() const { return T + margin(); }
};

using RealMultiplier = std::function<double(double)>;

// K x N matrix of (F(D) e_m)(x_k); F = nullptr is the identity. breaks lists points where F is not smooth.
Eigen::MatrixXd line_basis_matrix(const LineSpace& space, const std::vector<double>& points, const RealMultiplier& F = nullptr,
                                  std::vector<double> breaks = {});

// Energy of the outermost basis function outside [lo, hi].
double line_leakage(const LineSpace& space, double lo, double hi, const RealMultiplier& F = nullptr, std::vector<double> breaks = {});

struct LineFn {
    LineSpace space;
    VectorXc coeffs;  // orthonormal coordinates
    double norm() const { return coeffs.norm(); }
};

std::vector<Complex> evaluate(const LineFn& f, const std::vector<double>& points);
LineFn random_line_fn(const LineSpace& space, std::mt19937_64& rng, bool real_valued = false);
// sqrt((pi/omega) sum_k |f(k pi/omega)|^2) over samples in the sampling window.
double shannon_norm(const LineFn& f, double omega);

// Kernel of F_j(D) on the line: (1/pi) int_0^inf F_j(xi) cos(xi u) dxi.
std::vector<double> line_filter_kernel(const FilterBank& bank, int j, const std::vector<double>& u);

struct SamplingSet1D {
    std::vector<double> x;  // strictly increasing
    double rho = 0.0;
    double min_gap = 0.0;
    double max_gap = 0.0;
};

// Gaps drawn uniformly in [gap_lo, gap_hi], starting near lo, up to hi.
SamplingSet1D jittered_sampling(double lo, double hi, double gap_lo, double gap_hi, std::uint64_t seed);
SamplingSet1D uniform_sampling(double half_width, double h);
// |I_k| = x_{k+1} - x_k; the last point repeats the previous gap.
std::vector<double> cell_lengths(const SamplingSet1D& s);

struct LineFrameResult {
    Frame frame;
    double leakage = 0.0;
    double half_width = 0.0;  // sampling window [-half_width, half_width]
    double theorem_lo = std::numeric_limits<double>::quiet_NaN();
    double theorem_hi = std::numeric_limits<double>::quiet_NaN();
    bool omega_flag = false;  // omega <= 1: the weaker rho hypothesis is not implied
};

// Atoms sqrt(w_k) F_j(D) delta_{x_k} in the coordinates of space, levels 0..J (J < 0: one unfiltered level).
Frame line_weighted_frame(const LineSpace& space, const std::vector<double>& x, const std::vector<double>& weights, int J,
                          FrameKind kind);

// Atoms sqrt|I_k| (projection of delta_{x_k} onto PW_omega); levels > 0 splits them by F_j.
LineFrameResult line_irregular_frame(const LineSpace& space, double eps, const SamplingSet1D& s, int levels = -1,
                                     double leakage_tol = 1e-10);

// Levels 0..J on x = k pi / 2^{j+1} with weights pi / 2^{j+1}.
LineFrameResult line_shannon_frame(const LineSpace& space, int J, double leakage_tol = 1e-10);

struct LineCubature {
    std::vector<double> x;
    std::vector<double> weights;
    double band = 0.0;
    double rho = 0.0;
    double residual = 0.0;
    double min_weight = 0.0;
    double max_weight = 0.0;
    double condition = 0.0;
    double window = 0.0;  // moment basis centers lie in [-window, window]
    std::size_t moment_count = 0;
};

// lambda = w + S^T (S S^T)^{-1} (m - S w) on a basis containing PW_band; requires rho < gamma/(6 band).
LineCubature line_cubature(double band, double gamma, const SamplingSet1D& s);

// Atoms sqrt(lambda_k) F_j(D) delta_{x_k}; needs space.band_hi() <= rule.band / 2.
LineFrameResult line_cubature_frame(const LineSpace& space, const LineCubature& rule, double leakage_tol = 1e-10);

// Composite Gauss-Legendre nodes, 8 per Nyquist interval pi/band.
struct LineNodes {
    std::vector<double> x;
    std::vector<double> w;
};
LineNodes line_gauss_nodes(double lo, double hi, double band);

// Composite Gauss-Legendre integrals at 8 nodes per Nyquist interval pi/band.
Complex line_integral(const std::function<Complex(double)>& f, double lo, double hi, double band);
double line_l2_squared(const std::function<Complex(double)>& f, double lo, double hi, double band);

// Highest level whose filter meets [0, band].
int line_top_level(double band);

}  // namespace frames
