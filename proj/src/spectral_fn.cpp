#include "frames/spectral_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frames/circle_model.hpp"
#include "frames/reduce.hpp"

namespace frames {

SpectralFn::SpectralFn(ModelPtr model, VectorXc coeffs) : model_(std::move(model)), coeffs_(std::move(coeffs)) {
    if (!model_) throw PreconditionError("SpectralFn needs a model");
    if (static_cast<std::size_t>(coeffs_.size()) > model_->size())
        throw TruncationError("coefficient index beyond model eigenbasis");
    if (static_cast<std::size_t>(coeffs_.size()) < model_->size()) {
        const std::ptrdiff_t old = coeffs_.size();
        coeffs_.conservativeResize(static_cast<std::ptrdiff_t>(model_->size()));
        coeffs_.tail(coeffs_.size() - old).setZero();
    }
}

SpectralFn SpectralFn::zero(ModelPtr model) {
    const auto n = static_cast<std::ptrdiff_t>(model->size());
    return SpectralFn(std::move(model), VectorXc::Zero(n));
}

SpectralFn SpectralFn::basis(ModelPtr model, std::size_t index) {
    if (index >= model->size()) throw TruncationError("basis index beyond model eigenbasis");
    VectorXc c = VectorXc::Zero(static_cast<std::ptrdiff_t>(model->size()));
    c[static_cast<std::ptrdiff_t>(index)] = 1.0;
    return SpectralFn(std::move(model), std::move(c));
}

std::size_t SpectralFn::support_count() const {
    std::size_t n = static_cast<std::size_t>(coeffs_.size());
    while (n > 0 && coeffs_[static_cast<std::ptrdiff_t>(n - 1)] == Complex(0.0)) --n;
    return n;
}

double SpectralFn::band() const {
    const std::size_t n = support_count();
    return n == 0 ? 0.0 : model_->eigenvalue(n - 1);
}

double SpectralFn::norm() const { return l2_norm(coeffs_); }

GridFn::GridFn(ModelPtr model, VectorXc values) : model_(std::move(model)), values_(std::move(values)) {
    if (!model_) throw PreconditionError("GridFn needs a model");
    if (static_cast<std::size_t>(values_.size()) != model_->node_count())
        throw PreconditionError("GridFn length differs from quadrature node count");
}

std::vector<Complex> synthesize(const SpectralFn& f, std::span<const Point> points) {
    const SpectralModel& m = f.model();
    const std::size_t count = f.support_count();
    std::vector<Complex> out(points.size(), Complex(0.0));
    if (count == 0) return out;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel num_threads(worker_threads())
    {
        std::vector<Complex> basis(count);
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            m.eval_basis(points[i], basis);
            Complex s = 0.0;
            for (std::size_t l = 0; l < count; ++l) s += f.coeffs()[static_cast<std::ptrdiff_t>(l)] * basis[l];
            out[i] = s;
        }
    }
    return out;
}

GridFn synthesize_nodes(const SpectralFn& f) {
    return GridFn(f.model_ptr(), f.model().synthesize_nodes(f.coeffs().head(static_cast<std::ptrdiff_t>(f.support_count()))));
}

SpectralFn analyze(const GridFn& g, double band) {
    const SpectralModel& m = g.model();
    if (band > m.max_eigenvalue() + 1e-12 * std::max(1.0, band))
        throw TruncationError("analysis band exceeds model spectrum");
    const std::size_t count = m.count_upto(band);
    return SpectralFn(g.model_ptr(), m.analyze_nodes(g.values(), count));
}

SpectralFn apply_multiplier(const Multiplier& F, double t, const SpectralFn& f) {
    if (!(t > 0.0)) throw PreconditionError("apply_multiplier: t must be positive");
    const SpectralModel& m = f.model();
    VectorXc c = VectorXc::Zero(f.coeffs().size());
    const std::size_t count = f.support_count();
    for (std::size_t l = 0; l < count; ++l) {
        const auto i = static_cast<std::ptrdiff_t>(l);
        if (f.coeffs()[i] == Complex(0.0)) continue;
        c[i] = F(t * m.eigenvalues()[l]) * f.coeffs()[i];
    }
    return SpectralFn(f.model_ptr(), std::move(c));
}

double riesz_boas_residual(const SpectralFn& f, double omega, int K) {
    if (K < 1) throw PreconditionError("riesz_boas_residual: K must be >= 1");
    if (!(omega > 0.0)) throw PreconditionError("riesz_boas_residual: omega must be positive");
    if (f.band() > omega + 1e-12 * omega) throw PreconditionError("riesz_boas_residual: band(f) exceeds omega");
    // Terms k and 1-k pair into 2i sin(s_k lambda) with s_k = (pi/omega)(k - 1/2).
    const Multiplier R = [omega, K](double lam) {
        Complex series = 0.0;
        for (int k = 1; k <= K; ++k) {
            const double h = k - 0.5;
            const double sign = (k % 2 == 1) ? 1.0 : -1.0;
            const double s = kPi / omega * h;
            series += sign / (h * h) * Complex(0.0, 2.0 * std::sin(s * lam));
        }
        return Complex(0.0, lam) - omega / (kPi * kPi) * series;
    };
    return apply_multiplier(R, 1.0, f).norm();
}

double bernstein_excess(const SpectralFn& f, int s) {
    const SpectralFn Lf = apply_multiplier([s](double lam) { return Complex(std::pow(lam, s)); }, 1.0, f);
    return Lf.norm() - std::pow(f.band(), s) * f.norm();
}

double lp_norm(const GridFn& g, double p) {
    const auto& v = g.values();
    const auto& w = g.model().weights();
    const std::size_t n = static_cast<std::size_t>(v.size());
    if (std::isinf(p)) {
        double mx = 0.0;
        for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, std::abs(v[static_cast<std::ptrdiff_t>(i)]));
        return mx;
    }
    if (!(p >= 1.0)) throw PreconditionError("lp_norm: p must be >= 1");
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::abs(v[static_cast<std::ptrdiff_t>(i)]);
        terms[i] = w[i] * (p == 1.0 ? a : (p == 2.0 ? a * a : std::pow(a, p)));
    }
    const double s = pairwise_sum(terms);
    return p == 1.0 ? s : (p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p));
}

SpectralFn random_bandlimited(ModelPtr model, double omega, std::mt19937_64& rng, bool real_valued) {
    std::normal_distribution<double> nd(0.0, 1.0);
    const std::size_t count = model->count_upto(omega);
    VectorXc c = VectorXc::Zero(static_cast<std::ptrdiff_t>(model->size()));
    const bool circle = model->kind() == ManifoldKind::circle;
    for (std::size_t l = 0; l < count; ++l) {
        const auto i = static_cast<std::ptrdiff_t>(l);
        if (!real_valued) {
            const double re = nd(rng);
            const double im = nd(rng);
            c[i] = Complex(re, im);
        } else if (!circle) {
            c[i] = nd(rng);
        } else {
            const int k = CircleModel::frequency(l);
            if (k == 0) {
                c[i] = nd(rng);
            } else if (k < 0) {
                const double re = nd(rng);
                const double im = nd(rng);
                c[i] = Complex(re, im);
                c[static_cast<std::ptrdiff_t>(CircleModel::index_of(-k))] = Complex(re, -im);
            }
        }
    }
    return SpectralFn(std::move(model), std::move(c));
}

nlohmann::json to_json(const SpectralFn& f) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::ptrdiff_t l = 0; l < f.coeffs().size(); ++l) {
        const Complex c = f.coeffs()[l];
        if (c == Complex(0.0)) continue;
        arr.push_back({{"l", l}, {"re", c.real()}, {"im", c.imag()}});
    }
    return arr;
}

SpectralFn spectral_fn_from_json(ModelPtr model, const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("SpectralFn JSON must be an array");
    VectorXc c = VectorXc::Zero(static_cast<std::ptrdiff_t>(model->size()));
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("l")) throw ConfigError("SpectralFn entry needs field l");
        const auto l = e.at("l").get<long long>();
        if (l < 0 || static_cast<std::size_t>(l) >= model->size()) throw TruncationError("SpectralFn index beyond model eigenbasis");
        c[static_cast<std::ptrdiff_t>(l)] = Complex(e.value("re", 0.0), e.value("im", 0.0));
    }
    return SpectralFn(std::move(model), std::move(c));
}

}  // namespace frames
