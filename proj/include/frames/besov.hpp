#pragma once

#include <map>
#include <string>
#include <vector>

#include "frames/filter_bank.hpp"
#include "frames/frame.hpp"
#include "frames/lattice.hpp"

namespace frames {

struct BesovParams {
    double alpha = 1.0;
    double p = 2.0;  // [1, inf]
    double q = 2.0;  // (0, inf]
    int J = 1;       // levels 0..J
};

void validate(const BesovParams& params);

enum class BesovMode { approx, lp_block, frame, sampling, sphere_l2 };

std::string to_string(BesovMode mode);
BesovMode besov_mode_from_string(const std::string& s);

// Optional inputs some modes need.
struct BesovContext {
    const Frame* frame = nullptr;                 // Parseval frame for mode frame
    const std::vector<Lattice>* lattices = nullptr;  // level lattices 0..J for mode sampling
};

// Best-approximation proxy ||f - g(2 sqrt(L) / omega) f||_p.
double approximation_error(const FilterBank& bank, const SpectralFn& f, double omega, double p);
// Exact L_2 distance to PW_omega.
double l2_tail(const SpectralFn& f, double omega);

double besov_norm(const FilterBank& bank, const BesovContext& ctx, const SpectralFn& f, const BesovParams& params, BesovMode mode);

// Modes usable with the given model, context and parameters.
std::vector<BesovMode> applicable_modes(const SpectralModel& model, const BesovContext& ctx, const BesovParams& params);

struct EquivalenceReport {
    std::vector<BesovMode> modes;
    std::vector<std::vector<double>> norms;              // [function][mode]
    std::vector<std::vector<double>> ratio_spread;       // [mode a][mode b]: max/min of norm_a / norm_b
    std::vector<double> homogeneity_defect;              // max |N(cf) - |c| N(f)| / (|c| N(f))
    double max_spread = 0.0;
};

EquivalenceReport equivalence_report(const FilterBank& bank, const BesovContext& ctx, const std::vector<SpectralFn>& family,
                                     const BesovParams& params);

// Unit-L2 function with the same random profile shape(lambda / 2^j) at every level j.
SpectralFn dyadic_profile(const ModelPtr& model, int j, std::uint64_t seed);

}  // namespace frames
