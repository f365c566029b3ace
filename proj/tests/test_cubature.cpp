#include <doctest.h>

#include <cmath>
#include <random>

#include "frames/circle_model.hpp"
#include "frames/cubature.hpp"
#include "frames/sphere_model.hpp"

using namespace frames;

TEST_CASE("uniform circle lattice keeps the trapezoid weights") {
    const auto m = make_circle_model({16, 272});
    const Lattice lat = build_lattice(*m, 2.0 * kPi / 16.0, 3);
    const CellCover cells = build_cells(*m, lat);
    const CubatureRule rule = solve_weights(*m, lat, cells, 7.0);
    double total = 0.0;
    for (double w : rule.weights) {
        CHECK(std::abs(w - 2.0 * kPi / 16.0) <= 1e-12);
        total += w;
    }
    CHECK(std::abs(total - 2.0 * kPi) <= 1e-10);
    CHECK(rule.residual <= 1e-12);
}

TEST_CASE("sphere band-16 rule against a dense least-squares oracle") {
    const auto m = make_sphere_model({16, 129, 257});
    const double omega = m->band_of_degree(16);
    const Lattice lat = build_lattice(*m, 3.0 / omega, 7);
    const CellCover cells = build_cells(*m, lat);
    const CubatureRule rule = solve_weights(*m, lat, cells, omega);
    CHECK(rule.min_weight > 0.0);
    CHECK(rule.residual <= 1e-10);

    // Oracle: minimum-norm correction from a complete orthogonal decomposition of S.
    const std::size_t count = m->count_upto(omega);
    const Eigen::MatrixXd S = real_sampling_matrix(*m, lat.points, count);
    Eigen::VectorXd mom = Eigen::VectorXd::Zero(count);
    mom[0] = std::sqrt(4.0 * kPi);
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(cells.measures.data(), cells.measures.size());
    const Eigen::VectorXd mu = w + Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(S).solve(mom - S * w);
    double diff = 0.0;
    for (std::size_t k = 0; k < rule.weights.size(); ++k) diff = std::max(diff, std::abs(mu[k] - rule.weights[k]));
    CHECK(diff <= 1e-10 * rule.max_weight);

    // Exactness on the (complex) eigenbasis with analytic moments.
    std::vector<Complex> b(count);
    VectorXc acc = VectorXc::Zero(count);
    for (std::size_t k = 0; k < lat.points.size(); ++k) {
        m->eval_basis(lat.points[k], b);
        for (std::size_t l = 0; l < count; ++l) acc[l] += rule.weights[k] * b[l];
    }
    acc[0] -= std::sqrt(4.0 * kPi);
    CHECK(acc.cwiseAbs().maxCoeff() <= 1e-9);
    double total = 0.0;
    for (double x : rule.weights) total += x;
    CHECK(std::abs(total - 4.0 * kPi) <= 1e-10);
    MESSAGE("band 16: " << lat.points.size() << " points, weight ratio " << rule.max_weight / rule.min_weight << ", c1 " << rule.c1
                        << ", c2 " << rule.c2);
}

TEST_CASE("too coarse a lattice is refused") {
    const auto m = make_sphere_model(minimal_sphere_config(16));
    CHECK_THROWS_AS(build_cubature(*m, m->band_of_degree(16), 12.0, 1), CubatureError);
}

TEST_CASE("rate calibration brackets a working constant") {
    const auto m = make_sphere_model({8, 65, 129});
    const double omega = m->band_of_degree(8);
    const Calibration cal = calibrate_rate(*m, omega, 3, 1.0, 12.0, 6);
    CHECK(cal.a >= 1.0);
    CHECK(cal.a_fail > cal.a);
    CHECK_NOTHROW(build_cubature(*m, omega, cal.a, 3));
    MESSAGE("calibrated r*omega at band 8: " << cal.a);
}

TEST_CASE("exact discrete Fourier coefficients") {
    const auto m = make_sphere_model({16, 97, 193});
    const double omega = m->band_of_degree(16);
    const CubatureRule rule = build_cubature(*m, omega, 3.0, 9);
    const double half = m->band_of_degree(8);

    const SpectralFn u = SpectralFn::basis(m, SphereModel::index_of(5, -2));
    const auto us = synthesize(u, rule.nodes);
    const auto cu = discrete_fourier_coeffs(m, rule, us, half);
    CHECK(cu.exact);
    for (std::size_t l = 0; l < m->count_upto(half); ++l)
        CHECK(std::abs(cu.coeffs.coeffs()[l] - (l == SphereModel::index_of(5, -2) ? 1.0 : 0.0)) <= 1e-10);

    std::mt19937_64 rng(4);
    const SpectralFn f = random_bandlimited(m, half, rng);
    const auto fs = synthesize(f, rule.nodes);
    const auto cf = discrete_fourier_coeffs(m, rule, fs, half);
    const SpectralFn quad = analyze(synthesize_nodes(f), half);
    CHECK((cf.coeffs.coeffs() - quad.coeffs()).cwiseAbs().maxCoeff() <= 1e-10);
    const VectorXc back = synthesize_nodes(cf.coeffs).values() - synthesize_nodes(f).values();
    CHECK(back.cwiseAbs().maxCoeff() <= 1e-9);

    const auto over = discrete_fourier_coeffs(m, rule, fs, omega);
    CHECK_FALSE(over.exact);
    CHECK(over.required_band > rule.band);
}
