#pragma once

#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

#include "frames/spectral_model.hpp"

namespace frames {

using Multiplier = std::function<Complex(double)>;

// A function on a model given by its eigen-coefficients (length = model size).
class SpectralFn {
public:
    SpectralFn() = default;
    SpectralFn(ModelPtr model, VectorXc coeffs);

    static SpectralFn zero(ModelPtr model);
    static SpectralFn basis(ModelPtr model, std::size_t index);

    const SpectralModel& model() const { return *model_; }
    const ModelPtr& model_ptr() const noexcept { return model_; }
    const VectorXc& coeffs() const noexcept { return coeffs_; }

    // Largest eigenvalue carrying a nonzero coefficient (0 for the zero function).
    double band() const;
    // One past the last nonzero coefficient.
    std::size_t support_count() const;
    double norm() const;

private:
    ModelPtr model_;
    VectorXc coeffs_;
};

// Values at the model's quadrature nodes.
class GridFn {
public:
    GridFn() = default;
    GridFn(ModelPtr model, VectorXc values);

    const SpectralModel& model() const { return *model_; }
    const ModelPtr& model_ptr() const noexcept { return model_; }
    const VectorXc& values() const noexcept { return values_; }

private:
    ModelPtr model_;
    VectorXc values_;
};

std::vector<Complex> synthesize(const SpectralFn& f, std::span<const Point> points);
GridFn synthesize_nodes(const SpectralFn& f);
// Coefficients for lambda_l <= band by quadrature.
SpectralFn analyze(const GridFn& g, double band);

// c'_l = F(t lambda_l) c_l.
SpectralFn apply_multiplier(const Multiplier& F, double t, const SpectralFn& f);

// || i sqrt(L) f - (omega/pi^2) sum_k (-1)^{k-1}/(k-1/2)^2 e^{i(pi/omega)(k-1/2) sqrt(L)} f ||
// over k = -K+1 .. K.
double riesz_boas_residual(const SpectralFn& f, double omega, int K);

// ||L^{s/2} f|| - band^s ||f||; nonpositive up to rounding.
double bernstein_excess(const SpectralFn& f, int s);

// Quadrature L_p norm of grid values; p = infinity gives the max over nodes.
double lp_norm(const GridFn& g, double p);

// Random coefficients with band <= omega (complex Gaussian; real if real_valued).
SpectralFn random_bandlimited(ModelPtr model, double omega, std::mt19937_64& rng, bool real_valued = false);

nlohmann::json to_json(const SpectralFn& f);
SpectralFn spectral_fn_from_json(ModelPtr model, const nlohmann::json& j);

}  // namespace frames
