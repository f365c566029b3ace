#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frames/spectral_model.hpp"

namespace frames::cli {

using nlohmann::json;

struct Tolerances {
    double partition = 1e-12;
    double moment = 1e-9;
    double parseval = 1e-8;
    double reconstruction = 1e-8;
    double upper_slack = 1e-10;
    double lp_residual = 1e-10;
    double slope = 0.1;  // relative to max(1, |expected|)
    double envelope_spread = 10.0;
    double weight_ratio = 10.0;
    double besov_spread = 10.0;
    double besov_slope = 0.05;
    double homogeneity = 1e-12;
    double line_tight = 1e-8;
    double line_norm = 1e-8;
    double line_integral = 1e-9;
    double line_weight_ratio = 3.0;

    void scale(double s);
};

struct FrameSettings {
    double omega = 8.0;  // sampling-frame band
    double delta = 0.25;
    std::optional<double> c;  // sampling constant; calibrated when absent
    double parseval_a = 4.0;
    int functions = 20;
};

struct KernelSettings {
    std::optional<json> model;  // defaults to the run model
    int level = 1;
    int N = 4;
    std::vector<double> t;  // empty: dyadic range that fits the model
    std::vector<double> p;
};

struct BesovSettings {
    double alpha = 1.5;
    double p = 2.0;
    double q = 2.0;
    int family = 10;
};

struct LineSettings {
    double omega = 16.0;
    std::vector<double> eps{0.25, 0.5};
    double T = 6.283185307179586;
    int seeds = 5;
    double shannon_band = 4.0;
    int shannon_levels = 3;
    int functions = 20;
    double cubature_band = 16.0;
    double gamma = 0.5;
    double jitter = 0.6;  // gaps drawn in [jitter rho, rho]
    bool cubature_frame = true;
};

struct RunConfig {
    std::uint64_t seed = 1;
    json model;
    std::vector<json> suite_models;
    int levels = 3;
    double lattice_r = 0.3;
    double cubature_omega = 8.0;
    double cubature_a = 3.0;
    FrameSettings frame;
    KernelSettings kernel;
    std::vector<double> lp_p;
    BesovSettings besov;
    LineSettings line;
    Tolerances tol;
    std::string hash;  // FNV-1a of the canonical config text
};

// Strict schema: unknown keys and wrong types raise ConfigError.
RunConfig parse_config(const json& j);
RunConfig default_config();

// {"kind":"circle","max_degree":K,"quadrature_size":N} or {"kind":"sphere2","max_degree":L,"gauss_latitudes":G,"longitudes":M}.
ModelPtr make_model(const json& j);
// Same kind at twice the degree on a grid fine enough for lattices of the product bands.
ModelPtr make_fine_model(const SpectralModel& model);

std::string fnv1a_hex(const std::string& text);

}  // namespace frames::cli
