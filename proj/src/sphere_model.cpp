#include "frames/sphere_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frames/gauss_legendre.hpp"

namespace frames {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

}  // namespace

LegendreTable::LegendreTable(int max_degree) : L_(max_degree) {
    if (max_degree < 0) throw ConfigError("sphere: max_degree must be >= 0");
    a_.assign(table_size(), 0.0);
    b_.assign(table_size(), 0.0);
    for (int m = 0; m <= L_; ++m) {
        for (int l = m + 2; l <= L_; ++l) {
            const double l2 = static_cast<double>(l) * l;
            const double m2 = static_cast<double>(m) * m;
            const double lm1 = l - 1.0;
            a_[tri(l, m)] = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
            b_[tri(l, m)] = std::sqrt((lm1 * lm1 - m2) / (4.0 * lm1 * lm1 - 1.0));
        }
    }
}

void LegendreTable::evaluate(double x, double s, int lmax, std::span<double> out) const {
    if (lmax > L_) throw TruncationError("Legendre table degree exceeded");
    double pmm = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 0; m <= lmax; ++m) {
        if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
        out[tri(m, m)] = pmm;
        if (m + 1 <= lmax) {
            double p2 = pmm;
            double p1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
            out[tri(m + 1, m)] = p1;
            for (int l = m + 2; l <= lmax; ++l) {
                const std::size_t k = tri(l, m);
                const double p = a_[k] * (x * p1 - b_[k] * p2);
                out[k] = p;
                p2 = p1;
                p1 = p;
            }
        }
    }
}

SphereModel::SphereModel(const SphereConfig& cfg) : cfg_(cfg), table_(std::max(cfg.max_degree, 0)) {
    const int L = cfg.max_degree;
    if (L < 0) throw ConfigError("sphere: max_degree must be >= 0");
    if (cfg.gauss_latitudes < 2 * L + 1)
        throw ConfigError("sphere: gauss_latitudes must be >= 2*max_degree+1 (got " + std::to_string(cfg.gauss_latitudes) + ")");
    if (cfg.longitudes < 4 * L + 1)
        throw ConfigError("sphere: longitudes must be >= 4*max_degree+1 (got " + std::to_string(cfg.longitudes) + ")");

    const std::size_t n = static_cast<std::size_t>(L + 1) * (L + 1);
    eigenvalues_.resize(n);
    degrees_.resize(n);
    for (int l = 0; l <= L; ++l) {
        const double lam = std::sqrt(static_cast<double>(l) * (l + 1));
        for (int m = -l; m <= l; ++m) {
            eigenvalues_[index_of(l, m)] = lam;
            degrees_[index_of(l, m)] = l;
        }
    }

    const int G = cfg.gauss_latitudes;
    const int M = cfg.longitudes;
    const GaussLegendreRule gl = gauss_legendre(G);
    ring_x_ = gl.nodes;
    ring_s_.resize(G);
    ring_w_.resize(G);
    nodes_.resize(static_cast<std::size_t>(G) * M);
    weights_.resize(nodes_.size());
    for (int r = 0; r < G; ++r) {
        const double x = gl.nodes[r];
        const double s = std::sqrt((1.0 - x) * (1.0 + x));
        ring_s_[r] = s;
        ring_w_[r] = gl.weights[r] * 2.0 * kPi / M;
        for (int j = 0; j < M; ++j) {
            const double phi = 2.0 * kPi * j / M;
            const std::size_t i = static_cast<std::size_t>(r) * M + j;
            nodes_[i] = Point{s * std::cos(phi), s * std::sin(phi), x};
            weights_[i] = ring_w_[r];
        }
    }
    exact_degree_ = std::min(2 * G - 1, M - 1);
}

int SphereModel::degree_of_band(double omega) const {
    if (omega < 0.0) return -1;
    // Largest l with l(l+1) <= omega^2.
    int l = static_cast<int>(std::floor(std::sqrt(omega * omega + 0.25) - 0.5));
    const double tol = 1e-12 * std::max(1.0, omega);
    while (band_of_degree(l + 1) <= omega + tol) ++l;
    while (l >= 0 && band_of_degree(l) > omega + tol) --l;
    return l;
}

double SphereModel::band_of_degree(int degree) const {
    if (degree < 0) return 0.0;
    return std::sqrt(static_cast<double>(degree) * (degree + 1));
}

std::size_t SphereModel::count_of_degree(int degree) const {
    if (degree < 0) return 0;
    return static_cast<std::size_t>(degree + 1) * (degree + 1);
}

void SphereModel::fill_real(const Point& p, int lmax, std::span<double> out) const {
    const double s = std::sqrt(p.x * p.x + p.y * p.y);
    const double phi = std::atan2(p.y, p.x);
    std::vector<double> P(LegendreTable::tri(lmax + 1, 0));
    table_.evaluate(p.z, s, lmax, P);
    const std::size_t count = out.size();
    for (int m = 0; m <= lmax; ++m) {
        const double c = (m == 0) ? 1.0 : kSqrt2 * std::cos(m * phi);
        const double sn = (m == 0) ? 0.0 : kSqrt2 * std::sin(m * phi);
        for (int l = m; l <= lmax; ++l) {
            const double v = P[LegendreTable::tri(l, m)];
            const std::size_t ip = index_of(l, m);
            if (ip < count) out[ip] = v * c;
            if (m > 0) {
                const std::size_t im = index_of(l, -m);
                if (im < count) out[im] = v * sn;
            }
        }
    }
}

void SphereModel::eval_real_basis(const Point& p, std::span<double> out) const {
    if (out.empty()) return;
    if (out.size() > size()) throw TruncationError("sphere: index beyond model basis");
    fill_real(p, degrees_[out.size() - 1], out);
}

void SphereModel::eval_basis(const Point& p, std::span<Complex> out) const {
    if (out.empty()) return;
    if (out.size() > size()) throw TruncationError("sphere: index beyond model basis");
    std::vector<double> re(out.size());
    fill_real(p, degrees_[out.size() - 1], re);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = re[i];
}

double SphereModel::harmonic(int l, int m, const Point& p) const {
    if (l < 0 || l > cfg_.max_degree || std::abs(m) > l) throw TruncationError("sphere: harmonic index outside model");
    check_point(p);
    std::vector<double> v(index_of(l, l) + 1);
    fill_real(p, l, v);
    return v[index_of(l, m)];
}

void SphereModel::check_point(const Point& p) const {
    if (std::abs(dot(p, p) - 1.0) > 1e-12) throw DomainError("point is not on the unit sphere");
}

Point SphereModel::random_point(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> uz(-1.0, 1.0);
    std::uniform_real_distribution<double> up(0.0, 2.0 * kPi);
    const double z = uz(rng);
    const double phi = up(rng);
    const double s = std::sqrt((1.0 - z) * (1.0 + z));
    return {s * std::cos(phi), s * std::sin(phi), z};
}

double SphereModel::zonal_sum(std::span<const double> w, double c) const {
    if (w.empty()) return 0.0;
    c = std::clamp(c, -1.0, 1.0);
    double s = w[0];
    double p0 = 1.0;
    double p1 = c;
    for (std::size_t d = 1; d < w.size(); ++d) {
        s += w[d] * (2.0 * d + 1.0) * p1;
        const double p2 = ((2.0 * d + 1.0) * c * p1 - static_cast<double>(d) * p0) / (d + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return s / (4.0 * kPi);
}

namespace {

struct LongitudeTable {
    int M = 0;
    int L = 0;
    std::vector<double> cs;  // [j*(L+1) + m]
    std::vector<double> sn;
    LongitudeTable(int m_count, int lmax) : M(m_count), L(lmax) {
        cs.resize(static_cast<std::size_t>(M) * (L + 1));
        sn.resize(cs.size());
        for (int j = 0; j < M; ++j) {
            const double phi = 2.0 * kPi * j / M;
            for (int m = 0; m <= L; ++m) {
                cs[static_cast<std::size_t>(j) * (L + 1) + m] = std::cos(m * phi);
                sn[static_cast<std::size_t>(j) * (L + 1) + m] = std::sin(m * phi);
            }
        }
    }
};

}  // namespace

VectorXc SphereModel::synthesize_nodes(const VectorXc& coeffs) const {
    if (static_cast<std::size_t>(coeffs.size()) > size()) throw TruncationError("coefficient vector longer than model basis");
    std::size_t count = static_cast<std::size_t>(coeffs.size());
    while (count > 0 && coeffs[count - 1] == Complex(0.0)) --count;
    const int G = cfg_.gauss_latitudes;
    const int M = cfg_.longitudes;
    VectorXc out = VectorXc::Zero(static_cast<std::ptrdiff_t>(nodes_.size()));
    if (count == 0) return out;
    const int lmax = degrees_[count - 1];
    const LongitudeTable lt(M, lmax);
    auto coeff = [&](int l, int m) -> Complex {
        const std::size_t i = index_of(l, m);
        return i < count ? coeffs[static_cast<std::ptrdiff_t>(i)] : Complex(0.0);
    };
#pragma omp parallel num_threads(worker_threads())
    {
        std::vector<double> P(LegendreTable::tri(lmax + 1, 0));
        std::vector<Complex> ac(lmax + 1), as(lmax + 1);
#pragma omp for schedule(static)
        for (int r = 0; r < G; ++r) {
            table_.evaluate(ring_x_[r], ring_s_[r], lmax, P);
            for (int m = 0; m <= lmax; ++m) {
                Complex sc = 0.0, ss = 0.0;
                for (int l = m; l <= lmax; ++l) {
                    const double v = P[LegendreTable::tri(l, m)];
                    sc += coeff(l, m) * v;
                    if (m > 0) ss += coeff(l, -m) * v;
                }
                const double f = (m == 0) ? 1.0 : kSqrt2;
                ac[m] = sc * f;
                as[m] = ss * f;
            }
            for (int j = 0; j < M; ++j) {
                const double* c = &lt.cs[static_cast<std::size_t>(j) * (lmax + 1)];
                const double* s = &lt.sn[static_cast<std::size_t>(j) * (lmax + 1)];
                Complex v = 0.0;
                for (int m = 0; m <= lmax; ++m) v += ac[m] * c[m] + as[m] * s[m];
                out[static_cast<std::ptrdiff_t>(r) * M + j] = v;
            }
        }
    }
    return out;
}

VectorXc SphereModel::analyze_nodes(const VectorXc& values, std::size_t count) const {
    if (static_cast<std::size_t>(values.size()) != nodes_.size()) throw PreconditionError("grid length differs from node count");
    if (count > size()) throw TruncationError("analysis band beyond model basis");
    VectorXc out = VectorXc::Zero(static_cast<std::ptrdiff_t>(count));
    if (count == 0) return out;
    const int G = cfg_.gauss_latitudes;
    const int M = cfg_.longitudes;
    const int lmax = degrees_[count - 1];
    const LongitudeTable lt(M, lmax);
    // Per-ring contributions are kept and summed over rings in ascending order.
    Eigen::MatrixXcd ring_terms(static_cast<std::ptrdiff_t>(count), G);
#pragma omp parallel num_threads(worker_threads())
    {
        std::vector<double> P(LegendreTable::tri(lmax + 1, 0));
        std::vector<Complex> bc(lmax + 1), bs(lmax + 1);
#pragma omp for schedule(static)
        for (int r = 0; r < G; ++r) {
            table_.evaluate(ring_x_[r], ring_s_[r], lmax, P);
            std::fill(bc.begin(), bc.end(), Complex(0.0));
            std::fill(bs.begin(), bs.end(), Complex(0.0));
            for (int j = 0; j < M; ++j) {
                const Complex g = values[static_cast<std::ptrdiff_t>(r) * M + j];
                const double* c = &lt.cs[static_cast<std::size_t>(j) * (lmax + 1)];
                const double* s = &lt.sn[static_cast<std::size_t>(j) * (lmax + 1)];
                for (int m = 0; m <= lmax; ++m) {
                    bc[m] += g * c[m];
                    bs[m] += g * s[m];
                }
            }
            const double w = ring_w_[r];
            for (int l = 0; l <= lmax; ++l) {
                for (int m = -l; m <= l; ++m) {
                    const std::size_t i = index_of(l, m);
                    if (i >= count) continue;
                    const int am = std::abs(m);
                    const double v = P[LegendreTable::tri(l, am)] * w * (m == 0 ? 1.0 : kSqrt2);
                    ring_terms(static_cast<std::ptrdiff_t>(i), r) = v * (m >= 0 ? bc[am] : bs[am]);
                }
            }
        }
    }
    for (std::size_t i = 0; i < count; ++i) {
        Complex s = 0.0;
        for (int r = 0; r < G; ++r) s += ring_terms(static_cast<std::ptrdiff_t>(i), r);
        out[static_cast<std::ptrdiff_t>(i)] = s;
    }
    return out;
}

Eigen::VectorXd SphereModel::real_basis_moments(std::size_t count) const {
    // The basis is real, so the moments are the analysis of the constant 1.
    return analyze_nodes(VectorXc::Ones(static_cast<std::ptrdiff_t>(nodes_.size())), count).real();
}

double eval_sph_harm(int l, int m, const Point& p) {
    if (l < 0 || std::abs(m) > l) throw PreconditionError("eval_sph_harm: need l >= 0 and |m| <= l");
    if (std::abs(dot(p, p) - 1.0) > 1e-12) throw DomainError("point is not on the unit sphere");
    const LegendreTable table(l);
    std::vector<double> P(table.table_size());
    const double s = std::sqrt(p.x * p.x + p.y * p.y);
    table.evaluate(p.z, s, l, P);
    const int am = std::abs(m);
    const double v = P[LegendreTable::tri(l, am)];
    if (m == 0) return v;
    const double phi = std::atan2(p.y, p.x);
    return kSqrt2 * v * (m > 0 ? std::cos(am * phi) : std::sin(am * phi));
}

SphereConfig minimal_sphere_config(int max_degree) {
    return {max_degree, 2 * max_degree + 1, 4 * max_degree + 1};
}

ModelPtr make_sphere_model(const SphereConfig& cfg) { return std::make_shared<SphereModel>(cfg); }

}  // namespace frames
