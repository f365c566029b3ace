#include <doctest.h>

#include <cmath>
#include <random>

#include "frames/circle_model.hpp"
#include "frames/kernel.hpp"
#include "frames/sphere_model.hpp"

using namespace frames;

namespace {

std::vector<double> dyadic(int from, int to) {
    std::vector<double> t;
    for (int e = from; e <= to; ++e) t.push_back(std::ldexp(1.0, -e));
    return t;
}

const ModelPtr& sphere128() {
    static const ModelPtr m = make_sphere_model(minimal_sphere_config(128));
    return m;
}

}  // namespace

TEST_CASE("circle kernel on the diagonal") {
    const auto m = make_circle_model({64, 400});
    const FilterBank bank(5);
    const Point x = circle_point(0.37);
    for (int j = 0; j <= 4; ++j)
        for (double t : {1.0, 0.5}) {
            const Multiplier F = bank.filter(j);
            double oracle = 0.0;
            for (int k = -64; k <= 64; ++k) oracle += F(t * std::abs(k)).real();
            oracle /= 2.0 * kPi;
            CHECK(std::abs(kernel_eval(*m, F, t, x, x).real() - oracle) <= 1e-13 * std::max(1.0, oracle));
        }
}

TEST_CASE("sphere kernel against the eigenbasis sum") {
    const auto m = make_sphere_model(minimal_sphere_config(32));
    const Multiplier F = FilterBank(4).filter(3);
    std::mt19937_64 rng(2);
    std::vector<Complex> bx(m->size()), by(m->size());
    for (int i = 0; i < 100; ++i) {
        const Point x = m->random_point(rng), y = m->random_point(rng);
        const Complex kxy = kernel_eval(*m, F, 1.0, x, y);
        CHECK(std::abs(kxy - kernel_eval(*m, F, 1.0, y, x)) <= 1e-13);
        m->eval_basis(x, bx);
        m->eval_basis(y, by);
        Complex direct = 0.0;
        for (std::size_t l = 0; l < m->size(); ++l) direct += F(m->eigenvalue(l)) * bx[l] * std::conj(by[l]);
        CHECK(std::abs(kxy - direct) <= 1e-11);
    }
    const Multiplier zero = [](double) { return Complex(0.0); };
    CHECK(kernel_eval(*m, zero, 1.0, sphere_point(0.1, 0.2), sphere_point(1.0, 2.0)) == Complex(0.0));
    CHECK_THROWS_AS(kernel_eval(*m, F, 0.25, sphere_point(0.1, 0.2), sphere_point(1.0, 2.0)), TruncationError);
}

TEST_CASE("kernel L2 norm matches the coefficient sum") {
    const auto& m = sphere128();
    const Multiplier F = FilterBank(6).filter(1);
    const Point x = sphere_point(0.7, 1.3);
    std::vector<Complex> b(m->size());
    m->eval_basis(x, b);
    for (double t : dyadic(2, 5)) {
        double oracle = 0.0;
        for (std::size_t l = 0; l < m->size(); ++l) oracle += std::norm(F(t * m->eigenvalue(l))) * std::norm(b[l]);
        const double k2 = kernel_lp_norm(m, F, t, 2.0, x);
        CHECK(std::abs(k2 * k2 - oracle) <= 1e-10 * oracle);
    }
}

TEST_CASE("kernel L_p norms scale like t^{-n/q}") {
    const auto& m = sphere128();
    const Multiplier F = FilterBank(6).filter(1);
    const Point x = sphere_point(0.7, 1.3);
    const auto ts = dyadic(2, 5);
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
        std::vector<double> v;
        for (double t : ts) v.push_back(kernel_lp_norm(m, F, t, p, x));
        const double expected = -2.0 * (1.0 - (std::isinf(p) ? 0.0 : 1.0 / p));
        const double s = loglog_slope(ts, v);
        MESSAGE("p = " << p << ": slope " << s);
        CHECK(std::abs(s - expected) <= 0.1 * std::max(1.0, std::abs(expected)));
        if (p == 1.0) CHECK(*std::max_element(v.begin(), v.end()) <= 1.2 * *std::min_element(v.begin(), v.end()));
    }
}

TEST_CASE("kernel decay profile") {
    const auto& m = sphere128();
    const Multiplier F = FilterBank(6).filter(1);
    const Point x = sphere_point(0.7, 1.3);
    const auto prof = kernel_decay_profile(m, F, dyadic(0, 5), x, 4);
    double pmin = 1e300, pmax = 0, emin = 1e300, emax = 0;
    for (const auto& p : prof) {
        if (p.t <= 0.25) {
            pmin = std::min(pmin, p.normalized_peak);
            pmax = std::max(pmax, p.normalized_peak);
        }
        emin = std::min(emin, p.envelope);
        emax = std::max(emax, p.envelope);
    }
    CHECK(pmax <= 3.0 * pmin);
    CHECK(emax <= 10.0 * emin);
    for (const auto& p : prof) {
        CHECK(std::abs(p.far_distance - kPi / 2) <= 0.02);
        CHECK(p.far_value <= emax / (p.t * p.t) * std::pow(1.0 + p.far_distance / p.t, -4));
    }
    MESSAGE("envelope spread " << emax / emin);
}

TEST_CASE("Littlewood-Paley residual") {
    const auto& m = sphere128();
    const FilterBank bank(7);
    std::mt19937_64 rng(8);
    const double inf = std::numeric_limits<double>::infinity();

    const SpectralFn low = random_bandlimited(m, 16.0, rng, true);
    const GridFn one = synthesize_nodes(SpectralFn::basis(m, 0));
    for (double p : {1.0, 2.0, inf}) {
        CHECK(littlewood_paley_residual(m, bank, synthesize_nodes(low), p, 6) <= 1e-10 * lp_norm(synthesize_nodes(low), p));
        CHECK(littlewood_paley_residual(m, bank, one, p, 2) <= 1e-14 * lp_norm(one, p));
    }
    CHECK_THROWS_AS(littlewood_paley_residual(m, bank, one, 2.0, 7), TruncationError);

    const GridFn smooth = synthesize_nodes(heat_smoothed_noise(m, 1e-3, rng));
    for (double p : {1.0, 2.0, inf}) {
        double prev = inf;
        for (int J = 2; J <= 6; ++J) {
            const double r = littlewood_paley_residual(m, bank, smooth, p, J);
            CHECK(r < prev);
            prev = r;
        }
    }
}

TEST_CASE("level blocks are uniformly bounded on L_p") {
    const auto& m = sphere128();
    const FilterBank bank(6);
    std::mt19937_64 rng(6);
    std::vector<GridFn> family;
    for (int i = 0; i < 3; ++i) family.push_back(synthesize_nodes(heat_smoothed_noise(m, 1e-3, rng)));
    family.push_back(kernel_nodes(m, bank.filter(0), 0.125, sphere_point(0.3, 0.4)));
    double worst = 0.0;
    for (const auto& f : family)
        for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()})
            for (int j = 0; j <= 6; ++j) worst = std::max(worst, lp_norm(level_block(m, bank, f, j), p) / lp_norm(f, p));
    MESSAGE("max ||G_j f||_p / ||f||_p = " << worst);
    CHECK(worst <= 10.0);
}
