#include "frames/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace frames {

namespace {

struct DegreeWeights {
    std::vector<double> re;
    std::vector<double> im;
};

DegreeWeights degree_weights(const SpectralModel& model, const Multiplier& F, double t) {
    DegreeWeights w;
    const int D = model.max_degree();
    w.re.resize(static_cast<std::size_t>(D) + 1);
    w.im.resize(w.re.size());
    for (int d = 0; d <= D; ++d) {
        const Complex v = F(t * model.band_of_degree(d));
        w.re[static_cast<std::size_t>(d)] = v.real();
        w.im[static_cast<std::size_t>(d)] = v.imag();
    }
    // Trailing zero blocks cost recurrence steps without contributing.
    while (!w.re.empty() && w.re.back() == 0.0 && w.im.back() == 0.0) {
        w.re.pop_back();
        w.im.pop_back();
    }
    return w;
}

bool any_nonzero(const std::vector<double>& v) {
    return std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; });
}

Complex zonal(const SpectralModel& model, const DegreeWeights& w, double c, bool has_im) {
    const double re = model.zonal_sum(w.re, c);
    return {re, has_im ? model.zonal_sum(w.im, c) : 0.0};
}

}  // namespace

void check_kernel_support(const SpectralModel& model, const Multiplier& F, double t) {
    const double first_missing = model.band_of_degree(model.max_degree() + 1);
    const double top = std::max(4.0 * model.max_eigenvalue(), 2.0 * first_missing);
    constexpr int samples = 256;
    for (int i = 0; i <= samples; ++i) {
        const double lam = first_missing + (top - first_missing) * i / samples;
        if (std::abs(F(t * lam)) != 0.0) {
            std::ostringstream os;
            os << "kernel multiplier at t = " << t << " is nonzero at lambda = " << lam << " beyond the model spectrum";
            throw TruncationError(os.str());
        }
    }
}

Complex kernel_eval(const SpectralModel& model, const Multiplier& F, double t, const Point& x, const Point& y) {
    model.check_point(x);
    model.check_point(y);
    check_kernel_support(model, F, t);
    const DegreeWeights w = degree_weights(model, F, t);
    return zonal(model, w, dot(x, y), any_nonzero(w.im));
}

GridFn kernel_nodes(const ModelPtr& model, const Multiplier& F, double t, const Point& x) {
    model->check_point(x);
    check_kernel_support(*model, F, t);
    const DegreeWeights w = degree_weights(*model, F, t);
    const bool has_im = any_nonzero(w.im);
    const auto& nodes = model->nodes();
    VectorXc v(static_cast<std::ptrdiff_t>(nodes.size()));
#pragma omp parallel for schedule(static) num_threads(worker_threads())
    for (std::ptrdiff_t i = 0; i < v.size(); ++i) v[i] = zonal(*model, w, dot(x, nodes[static_cast<std::size_t>(i)]), has_im);
    return GridFn(model, std::move(v));
}

std::vector<KernelProfile> kernel_decay_profile(const ModelPtr& model, const Multiplier& F, const std::vector<double>& t_list,
                                                const Point& x, int N, int bins) {
    const int n = model->dimension();
    const auto& nodes = model->nodes();
    std::vector<double> dist(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) dist[i] = angle_between(x, nodes[i]);
    const double dmax = *std::max_element(dist.begin(), dist.end());
    std::vector<KernelProfile> out;
    for (double t : t_list) {
        const GridFn K = kernel_nodes(model, F, t, x);
        KernelProfile pr;
        pr.t = t;
        pr.center = x;
        pr.N = N;
        pr.peak = std::abs(kernel_eval(*model, F, t, x, x));
        pr.normalized_peak = pr.peak * std::pow(t, n);
        pr.bin_distance.resize(static_cast<std::size_t>(bins));
        pr.bin_max.assign(static_cast<std::size_t>(bins), 0.0);
        for (int b = 0; b < bins; ++b) pr.bin_distance[static_cast<std::size_t>(b)] = dmax * (b + 1) / bins;
        double far_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double a = std::abs(K.values()[static_cast<std::ptrdiff_t>(i)]);
            pr.envelope = std::max(pr.envelope, a * std::pow(t, n) * std::pow(1.0 + dist[i] / t, N));
            const auto b = std::min<std::size_t>(static_cast<std::size_t>(bins) - 1, static_cast<std::size_t>(dist[i] / dmax * bins));
            pr.bin_max[b] = std::max(pr.bin_max[b], a);
            const double gap = std::abs(dist[i] - kPi / 2.0);
            if (gap < far_gap || (gap == far_gap && a > pr.far_value)) {
                far_gap = gap;
                pr.far_distance = dist[i];
                pr.far_value = a;
            }
        }
        out.push_back(std::move(pr));
    }
    return out;
}

double kernel_lp_norm(const ModelPtr& model, const Multiplier& F, double t, double p, const Point& x) {
    return lp_norm(kernel_nodes(model, F, t, x), p);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw PreconditionError("loglog_slope: need at least two matching samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log2(x[i]), b = std::log2(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

GridFn level_block(const ModelPtr& model, const FilterBank& bank, const GridFn& f, int j) {
    if (FilterBank::band_hi(j) > model->max_eigenvalue()) throw TruncationError("level_block: level band beyond model spectrum");
    const SpectralFn c = analyze(f, model->max_eigenvalue());
    return synthesize_nodes(apply_multiplier(bank.squared_filter(j), 1.0, c));
}

double littlewood_paley_residual(const ModelPtr& model, const FilterBank& bank, const GridFn& f, double p, int J) {
    if (J < 0) throw PreconditionError("littlewood_paley_residual: J must be nonnegative");
    if (std::ldexp(1.0, J + 1) > model->max_eigenvalue())
        throw TruncationError("littlewood_paley_residual: 2^(J+1) beyond model spectrum");
    const SpectralFn c = analyze(f, model->max_eigenvalue());
    const Multiplier partial = [&bank, J](double lam) -> Complex {
        double s = 0.0;
        for (int j = 0; j <= J; ++j) s += bank.G(j, lam);
        return s;
    };
    const GridFn sum = synthesize_nodes(apply_multiplier(partial, 1.0, c));
    return lp_norm(GridFn(model, f.values() - sum.values()), p);
}

SpectralFn heat_smoothed_noise(const ModelPtr& model, double tau, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    VectorXc c(static_cast<std::ptrdiff_t>(model->size()));
    for (std::size_t l = 0; l < model->size(); ++l) {
        const double lam = model->eigenvalue(l);
        c[static_cast<std::ptrdiff_t>(l)] = nd(rng) * std::exp(-tau * lam * lam);
    }
    return SpectralFn(model, std::move(c));
}

}  // namespace frames
