#include "frames/cubature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frames/reduce.hpp"

namespace frames {

Eigen::MatrixXd real_sampling_matrix(const SpectralModel& model, std::span<const Point> points, std::size_t count) {
    Eigen::MatrixXd S(static_cast<std::ptrdiff_t>(count), static_cast<std::ptrdiff_t>(points.size()));
#pragma omp parallel for schedule(static) num_threads(worker_threads())
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(points.size()); ++k)
        model.eval_real_basis(points[k], std::span<double>(S.col(k).data(), count));
    return S;
}

Eigen::VectorXd real_moments(const SpectralModel& model, std::size_t count) { return model.real_basis_moments(count); }

CubatureRule solve_weights(const SpectralModel& model, const Lattice& lattice, const CellCover& cells, double omega) {
    if (!(omega >= 0.0)) throw PreconditionError("solve_weights: omega must be nonnegative");
    if (omega > model.max_eigenvalue() + 1e-12 * std::max(1.0, omega))
        throw TruncationError("solve_weights: band beyond model spectrum");
    const std::size_t K = lattice.points.size();
    if (cells.measures.size() != K) throw PreconditionError("solve_weights: cells do not match lattice");
    const std::size_t count = model.count_upto(omega);

    const Eigen::MatrixXd S = real_sampling_matrix(model, lattice.points, count);
    const Eigen::VectorXd m = real_moments(model, count);
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(cells.measures.data(), static_cast<std::ptrdiff_t>(K));

    // Projection onto range(S^T) through the Gram matrix S S^T.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<std::ptrdiff_t>(count), static_cast<std::ptrdiff_t>(count));
    gram.selfadjointView<Eigen::Lower>().rankUpdate(S);
    const Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(gram);
    const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
    const double dmin = diag.minCoeff();
    const double dmax = diag.maxCoeff();
    const double condition = (dmin > 0.0) ? (dmax / dmin) * (dmax / dmin) : std::numeric_limits<double>::infinity();
    if (llt.info() != Eigen::Success || !(dmin > 0.0) || condition > 1e14) {
        std::ostringstream os;
        os << "moment system rank-deficient: " << count << " moments, " << K << " points, Gram condition estimate " << condition
           << ", r*omega = " << lattice.r * omega;
        throw CubatureError(os.str());
    }

    Eigen::VectorXd mu = w;
    Eigen::VectorXd res = m - S * mu;
    double rmax = res.cwiseAbs().maxCoeff();
    for (int it = 0; it < 4; ++it) {
        const Eigen::VectorXd step = S.transpose() * llt.solve(res);
        const Eigen::VectorXd cand = mu + step;
        const Eigen::VectorXd cres = m - S * cand;
        const double cmax = cres.cwiseAbs().maxCoeff();
        if (it > 0 && cmax >= rmax) break;
        mu = cand;
        res = cres;
        rmax = cmax;
        if (rmax < 1e-15) break;
    }

    CubatureRule rule;
    rule.nodes = lattice.points;
    rule.weights.assign(mu.data(), mu.data() + mu.size());
    rule.band = omega;
    rule.residual = rmax;
    rule.r = lattice.r;
    rule.dimension = model.dimension();
    rule.volume = model.volume();
    rule.moment_count = count;
    rule.condition = condition;
    rule.min_weight = mu.minCoeff();
    rule.max_weight = mu.maxCoeff();
    const double rn = std::pow(lattice.r, model.dimension());
    rule.c1 = rule.min_weight / rn;
    rule.c2 = rule.max_weight / rn;
    rule.correction = (mu - w).cwiseAbs().maxCoeff() / w.maxCoeff();
    for (std::size_t k = 0; k < K; ++k) {
        if (!(rule.weights[k] > 0.0)) {
            std::ostringstream os;
            os << "lattice too coarse for band: weight " << k << " = " << rule.weights[k] << " at r*omega = " << lattice.r * omega;
            throw CubatureError(os.str());
        }
    }
    return rule;
}

CubatureRule build_cubature(const SpectralModel& model, double omega, double a, std::uint64_t seed) {
    if (!(omega > 0.0) || !(a > 0.0)) throw PreconditionError("build_cubature: omega and a must be positive");
    const Lattice lat = build_lattice(model, a / omega, seed);
    const CellCover cells = build_cells(model, lat);
    return solve_weights(model, lat, cells, omega);
}

Calibration calibrate_rate(const SpectralModel& model, double omega, std::uint64_t seed, double a_lo, double a_hi, int iterations) {
    if (!(a_lo > 0.0) || !(a_hi > a_lo)) throw PreconditionError("calibrate_rate: need 0 < a_lo < a_hi");
    Calibration cal;
    auto ok = [&](double a) {
        ++cal.evaluations;
        try {
            build_cubature(model, omega, a, seed);
            return true;
        } catch (const CubatureError&) {
            return false;
        }
    };
    if (!ok(a_lo)) throw CubatureError("calibrate_rate: lower bracket fails");
    if (ok(a_hi)) {
        cal.a = a_hi;
        return cal;
    }
    double lo = a_lo, hi = a_hi;
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid))
            lo = mid;
        else
            hi = mid;
    }
    cal.a = lo;
    cal.a_fail = hi;
    return cal;
}

DiscreteCoefficients discrete_fourier_coeffs(const ModelPtr& model, const CubatureRule& rule, std::span<const Complex> samples,
                                             double band, double f_band) {
    if (samples.size() != rule.nodes.size()) throw PreconditionError("discrete_fourier_coeffs: sample count differs from rule size");
    if (band > model->max_eigenvalue() + 1e-12 * std::max(1.0, band)) throw TruncationError("discrete_fourier_coeffs: band beyond model");
    if (f_band < 0.0) f_band = band;
    DiscreteCoefficients out;
    out.required_band = model->product_band(f_band, band);
    out.rule_band = rule.band;
    out.rule_residual = rule.residual;
    out.exact = rule.band + 1e-12 * std::max(1.0, rule.band) >= out.required_band;

    const std::size_t count = model->count_upto(band);
    const std::size_t K = rule.nodes.size();
    Eigen::MatrixXcd terms(static_cast<std::ptrdiff_t>(count), static_cast<std::ptrdiff_t>(K));
#pragma omp parallel num_threads(worker_threads())
    {
        std::vector<Complex> b(count);
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(K); ++k) {
            model->eval_basis(rule.nodes[k], b);
            const Complex wf = rule.weights[k] * samples[k];
            for (std::size_t l = 0; l < count; ++l) terms(static_cast<std::ptrdiff_t>(l), k) = wf * std::conj(b[l]);
        }
    }
    VectorXc c = VectorXc::Zero(static_cast<std::ptrdiff_t>(model->size()));
    std::vector<Complex> row(K);
    for (std::size_t l = 0; l < count; ++l) {
        for (std::size_t k = 0; k < K; ++k) row[k] = terms(static_cast<std::ptrdiff_t>(l), static_cast<std::ptrdiff_t>(k));
        c[static_cast<std::ptrdiff_t>(l)] = pairwise_sum(row);
    }
    out.coeffs = SpectralFn(model, std::move(c));
    return out;
}

}  // namespace frames
