#include "frames/frame.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "frames/reduce.hpp"

namespace frames {

std::string to_string(FrameKind kind) {
    switch (kind) {
        case FrameKind::pw_sampling: return "pw_sampling";
        case FrameKind::almost_parseval: return "almost_parseval";
        case FrameKind::parseval: return "parseval";
        case FrameKind::line_irregular: return "line_irregular";
        case FrameKind::line_shannon: return "line_shannon";
        case FrameKind::line_cubature: return "line_cubature";
        case FrameKind::dual: return "dual";
    }
    return "unknown";
}

std::size_t Frame::atom_count() const {
    std::size_t n = 0;
    for (const auto& l : levels) n += static_cast<std::size_t>(l.atoms.rows());
    return n;
}

SpectralFn Frame::atom(std::size_t level_index, std::size_t k) const {
    if (!model) throw PreconditionError("frame atom as SpectralFn needs a model");
    const FrameLevel& lv = levels.at(level_index);
    VectorXc c = VectorXc::Zero(static_cast<std::ptrdiff_t>(model->size()));
    c.segment(static_cast<std::ptrdiff_t>(lv.offset), lv.atoms.cols()) = lv.atoms.row(static_cast<std::ptrdiff_t>(k)).transpose();
    return SpectralFn(model, std::move(c));
}

std::size_t Frame::represented_dim() const {
    if (model && std::isfinite(test_band)) return model->count_upto(test_band);
    return dim;
}

namespace {

std::ptrdiff_t overlap(const FrameLevel& lv, std::size_t n) {
    if (lv.offset >= n) return 0;
    return std::min<std::ptrdiff_t>(lv.atoms.cols(), static_cast<std::ptrdiff_t>(n - lv.offset));
}

// Rows: conj of the first count eigenfunctions at each point, in parallel over points.
MatrixXc conj_basis_rows(const SpectralModel& model, const std::vector<Point>& pts, std::size_t count) {
    MatrixXc B(static_cast<std::ptrdiff_t>(pts.size()), static_cast<std::ptrdiff_t>(count));
#pragma omp parallel num_threads(worker_threads())
    {
        std::vector<Complex> b(count);
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(pts.size()); ++k) {
            model.eval_basis(pts[k], b);
            for (std::size_t l = 0; l < count; ++l) B(k, static_cast<std::ptrdiff_t>(l)) = std::conj(b[l]);
        }
    }
    return B;
}

// Contiguous index range where the level filter is nonzero.
std::pair<std::size_t, std::size_t> level_range(const SpectralModel& model, const FilterBank& bank, int j) {
    const auto& ev = model.eigenvalues();
    std::size_t lo = 0;
    while (lo < ev.size() && bank.F(j, ev[lo]) == 0.0 && ev[lo] < FilterBank::band_hi(j)) ++lo;
    std::size_t hi = lo;
    while (hi < ev.size() && bank.F(j, ev[hi]) != 0.0) ++hi;
    if (hi == lo) return {0, 0};
    return {lo, hi};
}

FrameLevel filtered_level(const SpectralModel& model, const FilterBank& bank, int j, const std::vector<Point>& centers,
                          const std::vector<double>& weights) {
    FrameLevel lv;
    lv.level = j;
    lv.band_lo = FilterBank::band_lo(j);
    lv.band_hi = FilterBank::band_hi(j);
    lv.centers = centers;
    lv.weights = weights;
    const auto [lo, hi] = level_range(model, bank, j);
    lv.offset = lo;
    if (hi == lo) {
        lv.atoms.resize(static_cast<std::ptrdiff_t>(centers.size()), 0);
        return lv;
    }
    const MatrixXc B = conj_basis_rows(model, centers, hi);
    lv.atoms = B.rightCols(static_cast<std::ptrdiff_t>(hi - lo));
    for (std::size_t l = lo; l < hi; ++l) lv.atoms.col(static_cast<std::ptrdiff_t>(l - lo)) *= bank.F(j, model.eigenvalues()[l]);
    for (std::size_t k = 0; k < centers.size(); ++k) lv.atoms.row(static_cast<std::ptrdiff_t>(k)) *= std::sqrt(weights[k]);
    return lv;
}

double top_test_band(const SpectralModel& model, const FilterBank& bank) {
    return std::min(std::ldexp(1.0, bank.levels()), model.max_eigenvalue());
}

}  // namespace

std::vector<VectorXc> analysis(const Frame& frame, const VectorXc& coords) {
    if (static_cast<std::size_t>(coords.size()) > frame.dim) throw PreconditionError("analysis: coordinate vector too long");
    std::vector<VectorXc> out;
    out.reserve(frame.levels.size());
    for (const auto& lv : frame.levels) {
        const std::ptrdiff_t w = overlap(lv, static_cast<std::size_t>(coords.size()));
        VectorXc c = VectorXc::Zero(lv.atoms.rows());
        if (w > 0) c.noalias() = lv.atoms.leftCols(w).conjugate() * coords.segment(static_cast<std::ptrdiff_t>(lv.offset), w);
        out.push_back(std::move(c));
    }
    return out;
}

VectorXc synthesis(const Frame& frame, const std::vector<VectorXc>& coeffs) {
    if (coeffs.size() != frame.levels.size()) throw PreconditionError("synthesis: one coefficient vector per level expected");
    VectorXc out = VectorXc::Zero(static_cast<std::ptrdiff_t>(frame.dim));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const auto& lv = frame.levels[i];
        if (coeffs[i].size() != lv.atoms.rows()) throw PreconditionError("synthesis: coefficient count differs from atom count");
        if (lv.atoms.cols() == 0) continue;
        out.segment(static_cast<std::ptrdiff_t>(lv.offset), lv.atoms.cols()).noalias() += lv.atoms.transpose() * coeffs[i];
    }
    return out;
}

MatrixXc frame_operator(const Frame& frame, std::size_t n) {
    MatrixXc S = MatrixXc::Zero(static_cast<std::ptrdiff_t>(n), static_cast<std::ptrdiff_t>(n));
    for (const auto& lv : frame.levels) {
        const std::ptrdiff_t w = overlap(lv, n);
        if (w == 0 || lv.atoms.rows() == 0) continue;
        const auto o = static_cast<std::ptrdiff_t>(lv.offset);
        S.block(o, o, w, w).noalias() += lv.atoms.leftCols(w).transpose() * lv.atoms.leftCols(w).conjugate();
    }
    return S;
}

FrameBounds frame_bounds_dim(const Frame& frame, std::size_t n) {
    if (frame.atom_count() == 0) throw PreconditionError("frame_bounds: empty frame");
    if (n == 0) throw PreconditionError("frame_bounds: empty test space");
    const MatrixXc S = frame_operator(frame, n);
    const Eigen::SelfAdjointEigenSolver<MatrixXc> es(S, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

FrameBounds frame_bounds(const Frame& frame, double test_band) {
    if (!frame.model) throw PreconditionError("frame_bounds: band restriction needs a model");
    if (test_band > frame.model->max_eigenvalue() + 1e-12 * std::max(1.0, test_band))
        throw TruncationError("frame_bounds: test band beyond model spectrum");
    return frame_bounds_dim(frame, frame.model->count_upto(test_band));
}

double identity_defect(const Frame& frame, std::size_t n, int iterations) {
    MatrixXc D = frame_operator(frame, n);
    D.diagonal().array() -= 1.0;
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> nd;
    VectorXc v(static_cast<std::ptrdiff_t>(n));
    for (auto& x : v) x = Complex(nd(rng), nd(rng));
    v /= v.norm();
    double lam = 0.0;
    for (int it = 0; it < iterations; ++it) {
        VectorXc w = D * v;
        const double nw = w.norm();
        lam = nw;
        if (nw == 0.0) break;
        v = w / nw;
    }
    return lam;
}

Frame build_pw_sampling_frame(const ModelPtr& model, double omega, const Lattice& lattice, const CellCover& cells,
                              std::optional<SamplingRate> rate) {
    if (cells.measures.size() != lattice.points.size()) throw PreconditionError("sampling frame: cells do not match lattice");
    if (rate) {
        const double required = rate->c * std::pow(rate->delta, 1.0 / model->dimension()) / omega;
        if (lattice.r > required * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "sampling rate violated: r = " << lattice.r << " but r <= " << required << " is required";
            throw HypothesisError(os.str());
        }
    }
    if (omega > model->max_eigenvalue() + 1e-12 * std::max(1.0, omega)) throw TruncationError("sampling frame: band beyond model");
    const std::size_t count = model->count_upto(omega);
    Frame fr;
    fr.kind = FrameKind::pw_sampling;
    fr.model = model;
    fr.dim = model->size();
    FrameLevel lv;
    lv.level = 0;
    lv.band_lo = 0.0;
    lv.band_hi = omega;
    lv.offset = 0;
    lv.centers = lattice.points;
    lv.weights = cells.measures;
    lv.atoms = conj_basis_rows(*model, lattice.points, count);
    for (std::size_t k = 0; k < lattice.points.size(); ++k) lv.atoms.row(static_cast<std::ptrdiff_t>(k)) *= std::sqrt(cells.measures[k]);
    fr.levels.push_back(std::move(lv));
    fr.test_band = omega;
    const FrameBounds b = frame_bounds(fr, omega);
    fr.A = b.A;
    fr.B = b.B;
    return fr;
}

Frame build_almost_parseval(const ModelPtr& model, const FilterBank& bank, const std::vector<LevelSampling>& levels,
                            std::optional<SamplingRate> rate) {
    const int J = bank.levels();
    if (levels.size() != static_cast<std::size_t>(J + 1)) throw PreconditionError("almost-Parseval frame: one lattice per level 0..J expected");
    Frame fr;
    fr.kind = FrameKind::almost_parseval;
    fr.model = model;
    fr.dim = model->size();
    for (int j = 0; j <= J; ++j) {
        const auto& ls = levels[static_cast<std::size_t>(j)];
        if (ls.cells.measures.size() != ls.lattice.points.size()) throw PreconditionError("almost-Parseval frame: cells do not match lattice");
        if (rate) {
            const double required = rate->c * std::pow(rate->delta, 1.0 / model->dimension()) * std::ldexp(1.0, -j - 1);
            if (ls.lattice.r > required * (1.0 + 1e-12)) {
                std::ostringstream os;
                os << "sampling rate violated at level " << j << ": r = " << ls.lattice.r << " but r <= " << required << " is required";
                throw HypothesisError(os.str());
            }
        }
        fr.levels.push_back(filtered_level(*model, bank, j, ls.lattice.points, ls.cells.measures));
    }
    fr.test_band = top_test_band(*model, bank);
    const FrameBounds b = frame_bounds(fr, fr.test_band);
    fr.A = b.A;
    fr.B = b.B;
    return fr;
}

double parseval_required_band(const SpectralModel& model, int j) {
    const double top = std::min(FilterBank::band_hi(j), model.max_eigenvalue());
    return model.product_band(top, top);
}

std::vector<CubatureRule> build_parseval_rules(const SpectralModel& quad_model, const SpectralModel& model, const FilterBank& bank,
                                               double a, std::uint64_t seed) {
    std::vector<CubatureRule> rules;
    for (int j = 0; j <= bank.levels(); ++j) {
        const double need = parseval_required_band(model, j);
        if (!rules.empty() && rules.back().band == need) {
            rules.push_back(rules.back());
            continue;
        }
        if (need > quad_model.max_eigenvalue() + 1e-12 * need)
            throw TruncationError("build_parseval_rules: quadrature model does not reach band " + std::to_string(need));
        double aa = a;
        for (int attempt = 0;; ++attempt) {
            try {
                rules.push_back(build_cubature(quad_model, need, aa, seed + static_cast<std::uint64_t>(j)));
                break;
            } catch (const CubatureError&) {
                if (attempt >= 6) throw;
                aa *= 0.85;
            }
        }
    }
    return rules;
}

Frame build_parseval(const ModelPtr& model, const FilterBank& bank, const std::vector<CubatureRule>& rules) {
    const int J = bank.levels();
    if (rules.size() != static_cast<std::size_t>(J + 1)) throw PreconditionError("Parseval frame: one cubature rule per level 0..J expected");
    Frame fr;
    fr.kind = FrameKind::parseval;
    fr.model = model;
    fr.dim = model->size();
    for (int j = 0; j <= J; ++j) {
        const CubatureRule& rule = rules[static_cast<std::size_t>(j)];
        const double need = parseval_required_band(*model, j);
        if (rule.band + 1e-12 * std::max(1.0, need) < need) {
            std::ostringstream os;
            os << "cubature for level " << j << " is exact up to " << rule.band << " but band " << need << " is required";
            throw HypothesisError(os.str());
        }
        fr.levels.push_back(filtered_level(*model, bank, j, rule.nodes, rule.weights));
    }
    fr.test_band = top_test_band(*model, bank);
    const FrameBounds b = frame_bounds(fr, fr.test_band);
    fr.A = b.A;
    fr.B = b.B;
    return fr;
}

Frame dual_frame(const Frame& frame, double tol, DualReport* report) {
    const std::size_t n = frame.represented_dim();
    if (n == 0 || frame.atom_count() == 0) throw PreconditionError("dual_frame: empty frame");
    const FrameBounds fb = frame_bounds_dim(frame, n);
    if (!(fb.A > 0.0)) throw ConditioningError("dual_frame: lower frame bound is not positive");
    const MatrixXc S = frame_operator(frame, n);
    const auto N = static_cast<std::ptrdiff_t>(n);

    Frame dual;
    dual.kind = FrameKind::dual;
    dual.model = frame.model;
    dual.dim = frame.dim;
    dual.test_band = frame.test_band;
    DualReport rep;
    const int max_iter = 10 * static_cast<int>(n) + 50;
    for (const auto& lv : frame.levels) {
        const std::ptrdiff_t w = overlap(lv, n);
        const std::ptrdiff_t K = lv.atoms.rows();
        MatrixXc Bm = MatrixXc::Zero(N, K);
        if (w > 0) Bm.middleRows(static_cast<std::ptrdiff_t>(lv.offset), w) = lv.atoms.leftCols(w).transpose();
        // Block conjugate gradients with per-column step sizes.
        MatrixXc X = MatrixXc::Zero(N, K);
        MatrixXc R = Bm;
        MatrixXc P = R;
        Eigen::VectorXd bnorm = Bm.colwise().norm().transpose();
        Eigen::VectorXd rr = R.colwise().squaredNorm().transpose();
        int it = 0;
        double worst = 0.0;
        for (; it < max_iter; ++it) {
            worst = 0.0;
            for (std::ptrdiff_t k = 0; k < K; ++k)
                if (bnorm[k] > 0.0) worst = std::max(worst, std::sqrt(rr[k]) / bnorm[k]);
            if (worst <= tol) break;
            const MatrixXc SP = S * P;
            for (std::ptrdiff_t k = 0; k < K; ++k) {
                if (rr[k] == 0.0) continue;
                const double pSp = P.col(k).dot(SP.col(k)).real();
                if (!(pSp > 0.0)) continue;
                const double alpha = rr[k] / pSp;
                X.col(k) += alpha * P.col(k);
                R.col(k) -= alpha * SP.col(k);
                const double rr_new = R.col(k).squaredNorm();
                P.col(k) = R.col(k) + (rr_new / rr[k]) * P.col(k);
                rr[k] = rr_new;
            }
        }
        if (worst > tol) {
            std::ostringstream os;
            os << "dual_frame: conjugate gradients stagnated at relative residual " << worst << " after " << it << " iterations";
            throw ConditioningError(os.str());
        }
        rep.iterations = std::max(rep.iterations, it);
        rep.max_relative_residual = std::max(rep.max_relative_residual, worst);
        for (std::ptrdiff_t k = 0; k < K; ++k) {
            const double total = X.col(k).squaredNorm();
            if (total == 0.0) continue;
            const double inside = w > 0 ? X.col(k).segment(static_cast<std::ptrdiff_t>(lv.offset), w).squaredNorm() : 0.0;
            rep.band_leakage = std::max(rep.band_leakage, std::max(0.0, 1.0 - inside / total));
        }
        FrameLevel dl;
        dl.level = lv.level;
        dl.band_lo = lv.band_lo;
        dl.band_hi = lv.band_hi;
        dl.offset = 0;
        dl.centers = lv.centers;
        dl.weights = lv.weights;
        dl.atoms = X.transpose();
        dual.levels.push_back(std::move(dl));
    }
    const FrameBounds db = frame_bounds_dim(dual, n);
    dual.A = db.A;
    dual.B = db.B;
    if (report) *report = rep;
    return dual;
}

ProductReport product_bandwidth(const ModelPtr& model, const SpectralFn& f, const SpectralFn& g, double probe_band) {
    if (probe_band > model->max_eigenvalue() + 1e-12 * std::max(1.0, probe_band))
        throw TruncationError("product_bandwidth: probe band beyond model spectrum");
    const int df = model->degree_of_band(f.band());
    const int dg = model->degree_of_band(g.band());
    ProductReport rep;
    rep.probe_band = probe_band;
    const int room = model->exact_degree() - df - dg;
    rep.certified_band = room >= 0 ? model->band_of_degree(room) : 0.0;
    rep.exact = room >= 0 && model->degree_of_band(probe_band) <= room;

    const VectorXc fg = synthesize_nodes(f).values().cwiseProduct(synthesize_nodes(g).values());
    const SpectralFn p = analyze(GridFn(model, fg), probe_band);
    const double bf = f.band(), bg = g.band();
    const double mx = std::max(bf, bg);
    rep.thresholds = {{"additive", model->product_band(bf, bg), 0.0},
                      {"twice_max", model->product_band(mx, mx), 0.0},
                      {"four_d_max", 4.0 * model->dimension() * mx, 0.0}};
    const std::size_t count = model->count_upto(probe_band);
    std::vector<double> all(count);
    for (std::size_t l = 0; l < count; ++l) all[l] = std::norm(p.coeffs()[static_cast<std::ptrdiff_t>(l)]);
    const double total = pairwise_sum(all);
    for (auto& t : rep.thresholds) {
        std::vector<double> beyond;
        for (std::size_t l = 0; l < count; ++l)
            if (model->eigenvalues()[l] > t.threshold * (1.0 + 1e-12)) beyond.push_back(all[l]);
        t.relative_mass_beyond = total > 0.0 ? pairwise_sum(beyond) / total : 0.0;
    }
    return rep;
}

double calibrate_sampling_constant(const ModelPtr& model, double omega, double delta, std::uint64_t seed, double a_lo, double a_hi,
                                   int iterations) {
    auto ok = [&](double a) {
        const Lattice lat = build_lattice(*model, a / omega, seed);
        const CellCover cells = build_cells(*model, lat);
        return build_pw_sampling_frame(model, omega, lat, cells).A >= 1.0 - delta;
    };
    if (!ok(a_lo)) throw HypothesisError("calibrate_sampling_constant: lower bracket fails");
    double lo = a_lo, hi = a_hi;
    if (ok(hi)) {
        lo = hi;
    } else {
        for (int i = 0; i < iterations; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (ok(mid))
                lo = mid;
            else
                hi = mid;
        }
    }
    return lo / std::pow(delta, 1.0 / model->dimension());
}

}  // namespace frames
