#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "frames/cubature.hpp"
#include "frames/filter_bank.hpp"
#include "frames/lattice.hpp"
#include "frames/spectral_fn.hpp"

namespace frames {

enum class FrameKind { pw_sampling, almost_parseval, parseval, line_irregular, line_shannon, line_cubature, dual };

std::string to_string(FrameKind kind);

// Atoms of one level as rows over the coordinate range [offset, offset + cols).
struct FrameLevel {
    int level = 0;
    double band_lo = 0.0;
    double band_hi = 0.0;
    std::size_t offset = 0;
    MatrixXc atoms;
    std::vector<Point> centers;
    std::vector<double> weights;
};

struct Frame {
    FrameKind kind = FrameKind::pw_sampling;
    ModelPtr model;           // null for line frames
    std::size_t dim = 0;      // coordinate dimension
    std::vector<FrameLevel> levels;
    double test_band = std::numeric_limits<double>::quiet_NaN();
    double A = std::numeric_limits<double>::quiet_NaN();
    double B = std::numeric_limits<double>::quiet_NaN();

    std::size_t atom_count() const;
    SpectralFn atom(std::size_t level_index, std::size_t k) const;
    // Number of coordinates that make up the represented space.
    std::size_t represented_dim() const;
};

struct FrameBounds {
    double A = 0.0;
    double B = 0.0;
};

// Frame coefficients <f, atom> per level.
std::vector<VectorXc> analysis(const Frame& frame, const VectorXc& coords);
// sum c_k atom_k in coordinates (length frame.dim).
VectorXc synthesis(const Frame& frame, const std::vector<VectorXc>& coeffs);
// Frame operator restricted to the first n coordinates.
MatrixXc frame_operator(const Frame& frame, std::size_t n);
// Extremal eigenvalues of the frame operator on PW_{test_band} (compact models).
FrameBounds frame_bounds(const Frame& frame, double test_band);
// Same on the first n coordinates.
FrameBounds frame_bounds_dim(const Frame& frame, std::size_t n);
// ||S - I|| on the first n coordinates by power iteration.
double identity_defect(const Frame& frame, std::size_t n, int iterations = 200);

struct SamplingRate {
    double c = 0.0;      // r <= c delta^{1/n} / omega
    double delta = 0.25;
};

Frame build_pw_sampling_frame(const ModelPtr& model, double omega, const Lattice& lattice, const CellCover& cells,
                              std::optional<SamplingRate> rate = std::nullopt);

struct LevelSampling {
    Lattice lattice;
    CellCover cells;
};

Frame build_almost_parseval(const ModelPtr& model, const FilterBank& bank, const std::vector<LevelSampling>& levels,
                            std::optional<SamplingRate> rate = std::nullopt);

// Product-exactness band a level-j rule needs.
double parseval_required_band(const SpectralModel& model, int j);

// One rule per level at r = a / band on quad_model (which must reach the required degree);
// levels with equal required band share a rule; a shrinks by 15% on a positivity failure.
std::vector<CubatureRule> build_parseval_rules(const SpectralModel& quad_model, const SpectralModel& model, const FilterBank& bank,
                                               double a, std::uint64_t seed);

Frame build_parseval(const ModelPtr& model, const FilterBank& bank, const std::vector<CubatureRule>& rules);

struct DualReport {
    int iterations = 0;
    double max_relative_residual = 0.0;
    double band_leakage = 0.0;  // max energy fraction of a dual atom outside its level band
};

// Canonical dual atoms S^{-1} atom by block conjugate gradients on the represented space.
Frame dual_frame(const Frame& frame, double tol = 1e-10, DualReport* report = nullptr);

struct ProductThreshold {
    std::string name;
    double threshold = 0.0;
    double relative_mass_beyond = 0.0;
};

struct ProductReport {
    double probe_band = 0.0;
    double certified_band = 0.0;
    bool exact = true;
    std::vector<ProductThreshold> thresholds;
};

ProductReport product_bandwidth(const ModelPtr& model, const SpectralFn& f, const SpectralFn& g, double probe_band);

// Largest r*omega (bisection) whose sampling frame keeps A >= 1 - delta; returns c = a / delta^{1/n}.
double calibrate_sampling_constant(const ModelPtr& model, double omega, double delta, std::uint64_t seed, double a_lo, double a_hi,
                                   int iterations);

}  // namespace frames
