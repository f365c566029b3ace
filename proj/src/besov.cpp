#include "frames/besov.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "frames/kernel.hpp"
#include "frames/reduce.hpp"

namespace frames {

void validate(const BesovParams& b) {
    if (!(b.alpha > 0.0)) throw ConfigError("besov: alpha must be positive");
    if (!(b.p >= 1.0)) throw ConfigError("besov: p must lie in [1, inf]");
    if (!(b.q > 0.0)) throw ConfigError("besov: q must be positive");
    if (b.J < 1) throw ConfigError("besov: J must be at least 1");
}

std::string to_string(BesovMode mode) {
    switch (mode) {
        case BesovMode::approx: return "approx";
        case BesovMode::lp_block: return "lp_block";
        case BesovMode::frame: return "frame";
        case BesovMode::sampling: return "sampling";
        case BesovMode::sphere_l2: return "sphere_l2";
    }
    return "unknown";
}

BesovMode besov_mode_from_string(const std::string& s) {
    for (BesovMode m : {BesovMode::approx, BesovMode::lp_block, BesovMode::frame, BesovMode::sampling, BesovMode::sphere_l2})
        if (to_string(m) == s) return m;
    throw ConfigError("unknown besov mode: " + s);
}

namespace {

// (sum_j (w_j a_j)^q)^{1/q}, sup for q = inf.
double lq_sum(const std::vector<double>& terms, double q) {
    if (std::isinf(q)) return terms.empty() ? 0.0 : *std::max_element(terms.begin(), terms.end());
    std::vector<double> powed(terms.size());
    std::transform(terms.begin(), terms.end(), powed.begin(), [q](double v) { return std::pow(v, q); });
    return std::pow(pairwise_sum(powed), 1.0 / q);
}

double lp_sum(const VectorXc& v, double p) {
    if (std::isinf(p)) return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
    std::vector<double> powed(static_cast<std::size_t>(v.size()));
    for (std::ptrdiff_t i = 0; i < v.size(); ++i) powed[static_cast<std::size_t>(i)] = std::pow(std::abs(v[i]), p);
    return std::pow(pairwise_sum(powed), 1.0 / p);
}

SpectralFn block(const FilterBank& bank, const SpectralFn& f, int j) { return apply_multiplier(bank.squared_filter(j), 1.0, f); }

}  // namespace

double approximation_error(const FilterBank&, const SpectralFn& f, double omega, double p) {
    const Multiplier keep = [omega](double lam) -> Complex { return 1.0 - FilterBank::g(2.0 * lam / omega); };
    return lp_norm(synthesize_nodes(apply_multiplier(keep, 1.0, f)), p);
}

double l2_tail(const SpectralFn& f, double omega) {
    std::vector<double> tail;
    const auto& m = f.model();
    for (std::size_t l = 0; l < m.size(); ++l)
        if (m.eigenvalue(l) > omega) tail.push_back(std::norm(f.coeffs()[static_cast<std::ptrdiff_t>(l)]));
    return std::sqrt(pairwise_sum(tail));
}

double besov_norm(const FilterBank& bank, const BesovContext& ctx, const SpectralFn& f, const BesovParams& b, BesovMode mode) {
    validate(b);
    const SpectralModel& model = f.model();
    const int n = model.dimension();
    std::vector<double> terms;
    switch (mode) {
        case BesovMode::approx: {
            for (int j = 0; j <= b.J; ++j) terms.push_back(std::pow(2.0, j * b.alpha) * approximation_error(bank, f, std::ldexp(1.0, j), b.p));
            return lp_norm(synthesize_nodes(f), b.p) + lq_sum(terms, b.q);
        }
        case BesovMode::lp_block: {
            for (int j = 0; j <= b.J; ++j) terms.push_back(std::pow(2.0, j * b.alpha) * lp_norm(synthesize_nodes(block(bank, f, j)), b.p));
            return lp_norm(synthesize_nodes(f), b.p) + lq_sum(terms, b.q);
        }
        case BesovMode::frame: {
            if (!ctx.frame || ctx.frame->kind != FrameKind::parseval) throw PreconditionError("besov mode frame needs a Parseval frame");
            if (ctx.frame->model.get() != &model) throw PreconditionError("besov mode frame: frame and function live on different models");
            const auto coeffs = analysis(*ctx.frame, f.coeffs());
            const double s = b.alpha - n / b.p + n / 2.0;
            for (const auto& lv : ctx.frame->levels) {
                if (lv.level > b.J) break;
                const auto& c = coeffs[static_cast<std::size_t>(&lv - ctx.frame->levels.data())];
                terms.push_back(std::pow(2.0, lv.level * s) * lp_sum(c, b.p));
            }
            return lq_sum(terms, b.q);
        }
        case BesovMode::sampling: {
            if (!ctx.lattices || ctx.lattices->size() < static_cast<std::size_t>(b.J + 1))
                throw PreconditionError("besov mode sampling needs lattices for levels 0..J");
            const double s = b.alpha - (std::isinf(b.p) ? 0.0 : n / b.p);
            for (int j = 0; j <= b.J; ++j) {
                const auto& pts = (*ctx.lattices)[static_cast<std::size_t>(j)].points;
                const auto vals = synthesize(block(bank, f, j), pts);
                const VectorXc v = Eigen::Map<const VectorXc>(vals.data(), static_cast<std::ptrdiff_t>(vals.size()));
                terms.push_back(std::pow(2.0, j * s) * lp_sum(v, b.p));
            }
            return lq_sum(terms, b.q);
        }
        case BesovMode::sphere_l2: {
            if (model.kind() != ManifoldKind::sphere2) throw PreconditionError("besov mode sphere_l2 needs the sphere model");
            if (b.p != 2.0 || b.q != 2.0) throw PreconditionError("besov mode sphere_l2 needs p = q = 2");
            std::vector<double> w(model.size());
            for (std::size_t l = 0; l < model.size(); ++l)
                w[l] = std::pow(model.degree(l) + 1.0, 2.0 * b.alpha) * std::norm(f.coeffs()[static_cast<std::ptrdiff_t>(l)]);
            return std::sqrt(pairwise_sum(w));
        }
    }
    throw PreconditionError("besov: unknown mode");
}

std::vector<BesovMode> applicable_modes(const SpectralModel& model, const BesovContext& ctx, const BesovParams& b) {
    std::vector<BesovMode> out{BesovMode::approx, BesovMode::lp_block};
    if (ctx.frame && ctx.frame->kind == FrameKind::parseval && ctx.frame->model.get() == &model) out.push_back(BesovMode::frame);
    if (ctx.lattices && ctx.lattices->size() >= static_cast<std::size_t>(b.J + 1)) out.push_back(BesovMode::sampling);
    if (model.kind() == ManifoldKind::sphere2 && b.p == 2.0 && b.q == 2.0) out.push_back(BesovMode::sphere_l2);
    return out;
}

EquivalenceReport equivalence_report(const FilterBank& bank, const BesovContext& ctx, const std::vector<SpectralFn>& family,
                                     const BesovParams& params) {
    if (family.empty()) throw PreconditionError("equivalence_report: empty family");
    validate(params);
    EquivalenceReport rep;
    rep.modes = applicable_modes(family.front().model(), ctx, params);
    const std::size_t M = rep.modes.size();
    rep.norms.assign(family.size(), std::vector<double>(M, 0.0));
    rep.homogeneity_defect.assign(M, 0.0);
    const Complex scalars[] = {Complex(2.0, 0.0), Complex(-0.7, 1.1)};
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t a = 0; a < M; ++a) {
            const double v = besov_norm(bank, ctx, family[i], params, rep.modes[a]);
            rep.norms[i][a] = v;
            for (Complex c : scalars) {
                const SpectralFn cf(family[i].model_ptr(), c * family[i].coeffs());
                const double vc = besov_norm(bank, ctx, cf, params, rep.modes[a]);
                if (v > 0.0) rep.homogeneity_defect[a] = std::max(rep.homogeneity_defect[a], std::abs(vc - std::abs(c) * v) / (std::abs(c) * v));
            }
        }
    rep.ratio_spread.assign(M, std::vector<double>(M, 1.0));
    for (std::size_t a = 0; a < M; ++a)
        for (std::size_t b = 0; b < M; ++b) {
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (const auto& row : rep.norms) {
                if (row[a] <= 0.0 || row[b] <= 0.0) continue;
                const double r = row[a] / row[b];
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
            rep.ratio_spread[a][b] = hi > 0.0 ? hi / lo : 1.0;
            rep.max_spread = std::max(rep.max_spread, rep.ratio_spread[a][b]);
        }
    return rep;
}

SpectralFn dyadic_profile(const ModelPtr& model, int j, std::uint64_t seed) {
    // Smooth bump on lambda / 2^j in [0.8, 1]; random signs per coefficient from the seed.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    VectorXc c = VectorXc::Zero(static_cast<std::ptrdiff_t>(model->size()));
    const double scale = std::ldexp(1.0, j);
    for (std::size_t l = 0; l < model->size(); ++l) {
        const double s = model->eigenvalue(l) / scale;
        const double xi = nd(rng);
        if (s <= 0.8 || s >= 1.0) continue;
        const double u = (s - 0.8) / 0.2;
        c[static_cast<std::ptrdiff_t>(l)] = xi * std::exp(-1.0 / (u * (1.0 - u)));
    }
    const double nrm = c.norm();
    if (nrm == 0.0) throw PreconditionError("dyadic_profile: no eigenvalue in the profile window");
    return SpectralFn(model, c / nrm);
}

}  // namespace frames
