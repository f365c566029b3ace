#include "frames/line_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "frames/gauss_legendre.hpp"
#include "frames/reduce.hpp"

namespace frames {

namespace {

constexpr int kPanelNodes = 24;
constexpr double kRollSteepness = 8.0;
constexpr int kInterp = 12;

const GaussLegendreRule& panel_rule(int n) {
    static const GaussLegendreRule r24 = gauss_legendre(kPanelNodes);
    static const GaussLegendreRule r8 = gauss_legendre(8);
    return n == 8 ? r8 : r24;
}

struct SpectralRule {
    std::vector<double> xi;
    std::vector<double> w;
};

// Composite rule on [0, top] split at breaks, panels at most one period of cos(xi U) wide.
SpectralRule spectral_rule(std::vector<double> breaks, double top, double U) {
    breaks.push_back(0.0);
    breaks.push_back(top);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const auto& gl = panel_rule(kPanelNodes);
    const double width = 32.0 / std::max(U, 1.0);
    SpectralRule r;
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double a = breaks[s], b = breaks[s + 1];
        if (a >= top || b <= a) continue;
        const int panels = std::max(8, static_cast<int>(std::ceil((b - a) / width)));
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = a + p * h;
            for (int i = 0; i < kPanelNodes; ++i) {
                r.xi.push_back(lo + 0.5 * h * (gl.nodes[static_cast<std::size_t>(i)] + 1.0));
                r.w.push_back(0.5 * h * gl.weights[static_cast<std::size_t>(i)]);
            }
        }
    }
    return r;
}

std::vector<double> filter_breaks(int j) {
    if (j == 0) return {1.0, 2.0};
    return {std::ldexp(1.0, j - 1), std::ldexp(1.0, j), std::ldexp(1.0, j + 1)};
}

RealMultiplier filter_of(const FilterBank& bank, int j) {
    return [&bank, j](double xi) { return bank.F(j, xi); };
}

// Largest tail energy over the filtered levels 0..J (J < 0: unfiltered).
double levels_leakage(const LineSpace& space, double lo, double hi, int J) {
    static const FilterBank bank(1);
    if (J < 0) return line_leakage(space, lo, hi);
    double worst = 0.0;
    for (int j = 0; j <= J; ++j) worst = std::max(worst, line_leakage(space, lo, hi, filter_of(bank, j), filter_breaks(j)));
    return worst;
}

void check_increasing(const std::vector<double>& x) {
    for (std::size_t k = 1; k < x.size(); ++k)
        if (!(x[k] > x[k - 1])) throw PreconditionError("sampling points must be strictly increasing");
}

}  // namespace

LineSpace LineSpace::inner(double band, double T, double beta) {
    if (!(band > 0.0) || !(T > 0.0)) throw ConfigError("line space: band and window must be positive");
    if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("line space: roll-off must lie in [0, 1)");
    LineSpace s;
    s.beta = beta;
    s.omega0 = band / (1.0 + beta);
    s.T = T;
    s.M = static_cast<int>(std::floor(T / s.spacing() + 1e-12));
    return s;
}

LineSpace LineSpace::outer(double band, double T, double beta) {
    if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("line space: roll-off must lie in [0, 1)");
    return inner(band * (1.0 + beta) / (1.0 - beta), T, beta);
}

double LineSpace::spacing() const { return kPi / omega0; }

double LineSpace::center(std::size_t i) const { return (static_cast<int>(i) - M) * spacing(); }

double LineSpace::profile(double xi) const {
    const double a = std::abs(xi);
    if (beta == 0.0) return a < omega0 ? 1.0 : (a == omega0 ? std::sqrt(0.5) : 0.0);
    const double t = (a - omega0) / (beta * omega0);
    if (t <= -1.0) return 1.0;
    if (t >= 1.0) return 0.0;
    // p(w0 - s)^2 + p(w0 + s)^2 = 1 exactly; the cut at |t| = 1 is below 1e-14.
    return std::sqrt(0.5 * std::erfc(kRollSteepness * t));
}

double LineSpace::margin() const {
    if (beta == 0.0) return 400.0 / omega0;
    return 80.0 / (beta * omega0);
}

Eigen::MatrixXd line_basis_matrix(const LineSpace& space, const std::vector<double>& points, const RealMultiplier& F,
                                  std::vector<double> breaks) {
    const auto N = static_cast<std::ptrdiff_t>(space.size());
    const auto K = static_cast<std::ptrdiff_t>(points.size());
    Eigen::MatrixXd out(K, N);
    if (K == 0) return out;
    // Every entry is phi(x_k - t_m) for one even band-limited phi; tabulate it and interpolate.
    double U = space.T;
    for (double x : points) U = std::max(U, std::abs(x) + space.T);
    breaks.push_back(space.omega0);
    if (space.beta > 0.0) {
        breaks.push_back(space.band_lo());
        breaks.push_back(space.band_hi());
    }
    const SpectralRule rule = spectral_rule(breaks, space.band_hi(), U);
    std::vector<double> xi, w;
    for (std::size_t q = 0; q < rule.xi.size(); ++q) {
        const double v = rule.w[q] * space.profile(rule.xi[q]) * (F ? F(rule.xi[q]) : 1.0);
        if (v != 0.0) {
            xi.push_back(rule.xi[q]);
            w.push_back(v);
        }
    }
    if (xi.empty()) {
        out.setZero();
        return out;
    }
    const double c = std::sqrt(kPi / space.omega0) / kPi;
    const double h = kPi / (12.0 * space.band_hi());
    const auto n_tab = static_cast<std::ptrdiff_t>(std::ceil(U / h)) + kInterp + 1;
    std::vector<double> tab(static_cast<std::size_t>(n_tab));
    constexpr std::ptrdiff_t block = 64;
#pragma omp parallel for schedule(static) num_threads(worker_threads())
    for (std::ptrdiff_t b0 = 0; b0 < n_tab; b0 += block) {
        std::vector<double> acc(static_cast<std::size_t>(block));
        std::vector<double> terms(xi.size());
        const std::ptrdiff_t len = std::min(block, n_tab - b0);
        // Rotation recurrence inside a short block, exact restart at each block start.
        std::vector<Complex> z(xi.size()), rot(xi.size());
        for (std::size_t q = 0; q < xi.size(); ++q) {
            z[q] = std::polar(1.0, xi[q] * static_cast<double>(b0) * h);
            rot[q] = std::polar(1.0, xi[q] * h);
        }
        for (std::ptrdiff_t i = 0; i < len; ++i) {
            for (std::size_t q = 0; q < xi.size(); ++q) {
                terms[q] = w[q] * z[q].real();
                z[q] *= rot[q];
            }
            tab[static_cast<std::size_t>(b0 + i)] = c * pairwise_sum(terms);
        }
    }
    // Barycentric weights of equispaced Lagrange interpolation.
    std::array<double, kInterp> bw{};
    for (int j = 0; j < kInterp; ++j) {
        double binom = 1.0;
        for (int i = 1; i <= j; ++i) binom = binom * (kInterp - i) / i;
        bw[static_cast<std::size_t>(j)] = (j % 2 == 0 ? 1.0 : -1.0) * binom;
    }
    const auto at = [&tab](std::ptrdiff_t i) { return tab[static_cast<std::size_t>(i < 0 ? -i : i)]; };
    const auto phi = [&](double u) {
        const double s = std::abs(u) / h;
        const auto i0 = static_cast<std::ptrdiff_t>(std::floor(s)) - kInterp / 2 + 1;
        const double r = s - static_cast<double>(i0);
        double num = 0.0, den = 0.0;
        for (int j = 0; j < kInterp; ++j) {
            const double d = r - j;
            if (d == 0.0) return at(i0 + j);
            const double t = bw[static_cast<std::size_t>(j)] / d;
            num += t * at(i0 + j);
            den += t;
        }
        return num / den;
    };
#pragma omp parallel for schedule(static) num_threads(worker_threads())
    for (std::ptrdiff_t k = 0; k < K; ++k)
        for (std::ptrdiff_t m = 0; m < N; ++m) out(k, m) = phi(points[static_cast<std::size_t>(k)] - space.center(static_cast<std::size_t>(m)));
    return out;
}

double line_leakage(const LineSpace& space, double lo, double hi, const RealMultiplier& F, std::vector<double> breaks) {
    const double span = 2.0 * space.margin();
    const LineNodes left = line_gauss_nodes(lo - span, lo, space.band_hi());
    const LineNodes right = line_gauss_nodes(hi, hi + span, space.band_hi());
    std::vector<double> x = left.x, w = left.w;
    x.insert(x.end(), right.x.begin(), right.x.end());
    w.insert(w.end(), right.w.begin(), right.w.end());
    // The outermost basis functions have the largest tails.
    const Eigen::MatrixXd B = line_basis_matrix(space, x, F, std::move(breaks));
    double worst = 0.0;
    for (std::ptrdiff_t col : {std::ptrdiff_t{0}, B.cols() - 1}) {
        std::vector<double> e(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) e[i] = w[i] * B(static_cast<std::ptrdiff_t>(i), col) * B(static_cast<std::ptrdiff_t>(i), col);
        worst = std::max(worst, pairwise_sum(e));
    }
    return worst;
}

std::vector<Complex> evaluate(const LineFn& f, const std::vector<double>& points) {
    const Eigen::MatrixXd B = line_basis_matrix(f.space, points);
    const VectorXc v = B * f.coeffs;
    return {v.data(), v.data() + v.size()};
}

LineFn random_line_fn(const LineSpace& space, std::mt19937_64& rng, bool real_valued) {
    std::normal_distribution<double> nd;
    LineFn f{space, VectorXc(static_cast<std::ptrdiff_t>(space.size()))};
    for (auto& c : f.coeffs) c = real_valued ? Complex(nd(rng), 0.0) : Complex(nd(rng), nd(rng));
    return f;
}

double shannon_norm(const LineFn& f, double omega) {
    const SamplingSet1D s = uniform_sampling(f.space.sample_half_width(), kPi / omega);
    const auto v = evaluate(f, s.x);
    std::vector<double> e(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) e[i] = std::norm(v[i]);
    return std::sqrt(kPi / omega * pairwise_sum(e));
}

std::vector<double> line_filter_kernel(const FilterBank& bank, int j, const std::vector<double>& u) {
    double U = 1.0;
    for (double x : u) U = std::max(U, std::abs(x));
    const double top = FilterBank::band_hi(j);
    const SpectralRule rule = spectral_rule(filter_breaks(j), top, U);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::vector<double> terms(rule.xi.size());
        for (std::size_t q = 0; q < rule.xi.size(); ++q) terms[q] = rule.w[q] * bank.F(j, rule.xi[q]) * std::cos(rule.xi[q] * u[i]);
        out[i] = pairwise_sum(terms) / kPi;
    }
    return out;
}

SamplingSet1D jittered_sampling(double lo, double hi, double gap_lo, double gap_hi, std::uint64_t seed) {
    if (!(gap_lo > 0.0) || gap_hi < gap_lo || !(hi > lo)) throw ConfigError("jittered_sampling: invalid gaps or range");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(gap_lo, gap_hi);
    SamplingSet1D s;
    s.rho = gap_hi;
    double x = lo;
    s.x.push_back(x);
    while (x < hi) {
        x += ud(rng);
        s.x.push_back(x);
    }
    s.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < s.x.size(); ++k) {
        s.min_gap = std::min(s.min_gap, s.x[k] - s.x[k - 1]);
        s.max_gap = std::max(s.max_gap, s.x[k] - s.x[k - 1]);
    }
    return s;
}

SamplingSet1D uniform_sampling(double half_width, double h) {
    if (!(h > 0.0)) throw ConfigError("uniform_sampling: spacing must be positive");
    const auto n = static_cast<long>(std::floor(half_width / h));
    SamplingSet1D s;
    for (long k = -n; k <= n; ++k) s.x.push_back(static_cast<double>(k) * h);
    s.rho = s.min_gap = s.max_gap = h;
    return s;
}

std::vector<double> cell_lengths(const SamplingSet1D& s) {
    check_increasing(s.x);
    std::vector<double> len(s.x.size());
    for (std::size_t k = 0; k + 1 < s.x.size(); ++k) len[k] = s.x[k + 1] - s.x[k];
    if (s.x.size() >= 2) len.back() = len[len.size() - 2];
    return len;
}

Frame line_weighted_frame(const LineSpace& space, const std::vector<double>& x, const std::vector<double>& weights, int J,
                          FrameKind kind) {
    if (x.size() != weights.size()) throw PreconditionError("line frame: one weight per point expected");
    static const FilterBank bank(1);
    Frame fr;
    fr.kind = kind;
    fr.dim = space.size();
    auto add_level = [&](int j, const RealMultiplier& F, std::vector<double> breaks) {
        FrameLevel lv;
        lv.level = j;
        lv.band_lo = j <= 0 ? 0.0 : FilterBank::band_lo(j);
        lv.band_hi = j < 0 ? space.band_hi() : std::min(FilterBank::band_hi(j), space.band_hi());
        lv.weights = weights;
        for (double v : x) lv.centers.push_back({v, 0.0, 0.0});
        lv.atoms = line_basis_matrix(space, x, F, std::move(breaks)).cast<Complex>();
        for (std::size_t k = 0; k < x.size(); ++k) lv.atoms.row(static_cast<std::ptrdiff_t>(k)) *= std::sqrt(weights[k]);
        fr.levels.push_back(std::move(lv));
    };
    if (J < 0) {
        add_level(-1, nullptr, {});
    } else {
        for (int j = 0; j <= J; ++j) add_level(j, filter_of(bank, j), filter_breaks(j));
    }
    const FrameBounds b = frame_bounds_dim(fr, fr.dim);
    fr.A = b.A;
    fr.B = b.B;
    return fr;
}

int line_top_level(double band) {
    int J = 0;
    while (std::ldexp(1.0, J) < band) ++J;
    return J;
}

LineFrameResult line_irregular_frame(const LineSpace& space, double eps, const SamplingSet1D& s, int levels, double leakage_tol) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("irregular frame: epsilon must lie in (0, 1)");
    check_increasing(s.x);
    const double omega = space.band_hi();
    const double need = eps / (3.0 * omega);
    std::ostringstream os;
    if (s.rho > need * (1.0 + 1e-12)) {
        os << "irregular sampling: rho = " << s.rho << " but rho <= eps/(3 omega) = " << need << " is required";
        throw HypothesisError(os.str());
    }
    if (s.max_gap > s.rho * (1.0 + 1e-12) || s.min_gap < s.rho / (1.0 + eps) * (1.0 - 1e-12)) {
        os << "irregular sampling: gaps [" << s.min_gap << ", " << s.max_gap << "] outside [rho/(1+eps), rho]";
        throw HypothesisError(os.str());
    }
    const int J = levels < 0 ? -1 : std::max(levels, line_top_level(omega) + 1);
    LineFrameResult r;
    r.leakage = levels_leakage(space, s.x.front(), s.x.back(), J);
    if (r.leakage > leakage_tol) {
        os << "irregular sampling: window leakage " << r.leakage << " exceeds " << leakage_tol;
        throw LeakageError(os.str());
    }
    r.frame = line_weighted_frame(space, s.x, cell_lengths(s), J, FrameKind::line_irregular);
    r.half_width = std::max(-s.x.front(), s.x.back());
    r.theorem_lo = 1.0 - 2.0 * eps / 3.0;
    r.theorem_hi = std::pow(1.0 + 10.0 * eps / 3.0, 2);
    r.omega_flag = omega <= 1.0;
    return r;
}

LineFrameResult line_shannon_frame(const LineSpace& space, int J, double leakage_tol) {
    if (J < 1) throw PreconditionError("Shannon frame: J must be at least 1");
    if (space.band_hi() > std::ldexp(1.0, J) * (1.0 + 1e-12))
        throw PreconditionError("Shannon frame: function band exceeds 2^J, where the levels stop summing to one");
    static const FilterBank bank(1);
    LineFrameResult r;
    // Filtered atoms inherit the tails of the filter transitions; widen the sampling window until they fit.
    double hw = space.sample_half_width();
    double extra = space.margin();
    r.leakage = levels_leakage(space, -hw, hw, J);
    for (int grow = 0; grow < 6 && r.leakage > leakage_tol; ++grow) {
        hw += extra;
        extra *= 2.0;
        r.leakage = levels_leakage(space, -hw, hw, J);
    }
    if (r.leakage > leakage_tol) {
        std::ostringstream os;
        os << "Shannon frame: window leakage " << r.leakage << " exceeds " << leakage_tol << " at half-width " << hw;
        throw LeakageError(os.str());
    }
    Frame fr;
    fr.kind = FrameKind::line_shannon;
    fr.dim = space.size();
    for (int j = 0; j <= J; ++j) {
        const double h = kPi / std::ldexp(1.0, j + 1);
        const SamplingSet1D s = uniform_sampling(hw, h);
        FrameLevel lv;
        lv.level = j;
        lv.band_lo = FilterBank::band_lo(j);
        lv.band_hi = std::min(FilterBank::band_hi(j), space.band_hi());
        lv.weights.assign(s.x.size(), h);
        for (double v : s.x) lv.centers.push_back({v, 0.0, 0.0});
        lv.atoms = (std::sqrt(h) * line_basis_matrix(space, s.x, filter_of(bank, j), filter_breaks(j))).cast<Complex>();
        fr.levels.push_back(std::move(lv));
    }
    const FrameBounds b = frame_bounds_dim(fr, fr.dim);
    fr.A = b.A;
    fr.B = b.B;
    r.frame = std::move(fr);
    r.half_width = hw;
    r.theorem_lo = r.theorem_hi = 1.0;
    return r;
}

LineCubature line_cubature(double band, double gamma, const SamplingSet1D& s) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("line cubature: gamma must lie in (0, 1)");
    if (!(band > 0.0)) throw ConfigError("line cubature: band must be positive");
    check_increasing(s.x);
    std::ostringstream os;
    const double need = gamma / (6.0 * band);
    if (!(s.rho < need)) {
        os << "line cubature: rho = " << s.rho << " but rho < gamma/(6 band) = " << need << " is required";
        throw HypothesisError(os.str());
    }
    if (s.max_gap > s.rho * (1.0 + 1e-12) || s.min_gap < 0.5 * s.rho * (1.0 - 1e-12)) {
        os << "line cubature: gaps [" << s.min_gap << ", " << s.max_gap << "] outside [rho/2, rho]";
        throw HypothesisError(os.str());
    }
    // A smaller roll-off keeps the moment count low; its margin is still short at cubature bands.
    constexpr double beta = 1.0 / 3.0;
    const LineSpace probe = LineSpace::outer(band, 1.0, beta);
    const double window = std::min(-s.x.front(), s.x.back()) - probe.margin();
    if (!(window > probe.spacing())) throw PreconditionError("line cubature: sampling range too short for the basis margin");
    const LineSpace basis = LineSpace::outer(band, window, beta);

    const Eigen::MatrixXd S = line_basis_matrix(basis, s.x).transpose();  // N x K
    const auto N = S.rows();
    const Eigen::VectorXd m = Eigen::VectorXd::Constant(N, std::sqrt(kPi / basis.omega0));
    const std::vector<double> len = cell_lengths(s);
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(len.data(), static_cast<std::ptrdiff_t>(len.size()));
    const Eigen::MatrixXd G = S * S.transpose();
    const Eigen::LLT<Eigen::MatrixXd> llt(G);
    LineCubature rule;
    if (llt.info() != Eigen::Success) throw CubatureError("line cubature: sampling Gram matrix is not positive definite");
    const Eigen::VectorXd d = Eigen::MatrixXd(llt.matrixL()).diagonal();
    rule.condition = std::pow(d.maxCoeff() / d.minCoeff(), 2);
    if (rule.condition > 1e14) {
        os << "line cubature: sampling Gram condition estimate " << rule.condition;
        throw CubatureError(os.str());
    }
    Eigen::VectorXd mu = w + S.transpose() * llt.solve(m - S * w);
    for (int it = 0; it < 4; ++it) {
        const Eigen::VectorXd res = m - S * mu;
        if (res.cwiseAbs().maxCoeff() <= 1e-15 * m.cwiseAbs().maxCoeff()) break;
        mu += S.transpose() * llt.solve(res);
    }
    rule.residual = (S * mu - m).cwiseAbs().maxCoeff();
    for (std::ptrdiff_t k = 0; k < mu.size(); ++k)
        if (!(mu[k] > 0.0)) {
            os << "line cubature: weight " << k << " is " << mu[k] << "; sampling too coarse for the band (rho * band = " << s.rho * band << ")";
            throw CubatureError(os.str());
        }
    rule.x = s.x;
    rule.weights.assign(mu.data(), mu.data() + mu.size());
    rule.band = band;
    rule.rho = s.rho;
    rule.min_weight = mu.minCoeff();
    rule.max_weight = mu.maxCoeff();
    rule.window = window;
    rule.moment_count = static_cast<std::size_t>(N);
    return rule;
}

LineFrameResult line_cubature_frame(const LineSpace& space, const LineCubature& rule, double leakage_tol) {
    if (space.band_hi() > 0.5 * rule.band * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "cubature frame: functions of band " << space.band_hi() << " need a rule exact to " << 2.0 * space.band_hi() << ", rule has " << rule.band;
        throw HypothesisError(os.str());
    }
    if (space.sample_half_width() > rule.window) throw PreconditionError("cubature frame: function window exceeds the rule's exact window");
    const int J = line_top_level(space.band_hi()) + 1;
    LineFrameResult r;
    r.leakage = levels_leakage(space, rule.x.front(), rule.x.back(), J);
    if (r.leakage > leakage_tol) {
        std::ostringstream os;
        os << "cubature frame: window leakage " << r.leakage << " exceeds " << leakage_tol;
        throw LeakageError(os.str());
    }
    r.frame = line_weighted_frame(space, rule.x, rule.weights, J, FrameKind::line_cubature);
    r.half_width = std::max(-rule.x.front(), rule.x.back());
    r.theorem_lo = r.theorem_hi = 1.0;
    return r;
}

LineNodes line_gauss_nodes(double lo, double hi, double band) {
    if (!(hi > lo) || !(band > 0.0)) throw PreconditionError("line_gauss_nodes: empty range or non-positive band");
    const auto& gl = panel_rule(8);
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * band / kPi)));
    const double h = (hi - lo) / panels;
    LineNodes n;
    n.x.reserve(static_cast<std::size_t>(panels) * 8);
    n.w.reserve(static_cast<std::size_t>(panels) * 8);
    for (int p = 0; p < panels; ++p)
        for (int i = 0; i < 8; ++i) {
            n.x.push_back(lo + p * h + 0.5 * h * (gl.nodes[static_cast<std::size_t>(i)] + 1.0));
            n.w.push_back(0.5 * h * gl.weights[static_cast<std::size_t>(i)]);
        }
    return n;
}

Complex line_integral(const std::function<Complex(double)>& f, double lo, double hi, double band) {
    const LineNodes n = line_gauss_nodes(lo, hi, band);
    std::vector<Complex> terms(n.x.size());
    for (std::size_t i = 0; i < n.x.size(); ++i) terms[i] = n.w[i] * f(n.x[i]);
    return pairwise_sum(std::span<const Complex>(terms));
}

double line_l2_squared(const std::function<Complex(double)>& f, double lo, double hi, double band) {
    return line_integral([&f](double x) { return Complex(std::norm(f(x)), 0.0); }, lo, hi, band).real();
}

}  // namespace frames
