#include <doctest.h>

#include <cmath>
#include <random>

#include "frames/circle_model.hpp"
#include "frames/filter_bank.hpp"
#include "frames/reduce.hpp"
#include "frames/spectral_fn.hpp"
#include "frames/sphere_model.hpp"

using namespace frames;

namespace {

ModelPtr circle64() { return make_circle_model({64, 257}); }

}  // namespace

TEST_CASE("synthesis of basis and zero functions") {
    const auto m = make_circle_model({8, 33});
    const SpectralFn e3 = SpectralFn::basis(m, 3);
    const auto v = synthesize_nodes(e3);
    for (std::size_t i = 0; i < m->node_count(); ++i) CHECK(std::abs(v.values()[i] - m->eval(3, m->nodes()[i])) <= 1e-15);
    const auto z = synthesize_nodes(SpectralFn::zero(m));
    CHECK(z.values().cwiseAbs().maxCoeff() == 0.0);
    CHECK(SpectralFn::zero(m).band() == 0.0);
}

TEST_CASE("coefficient index beyond the basis") {
    const auto m = make_circle_model({4, 17});
    CHECK_THROWS_AS(SpectralFn(m, VectorXc::Zero(10)), TruncationError);
    CHECK_THROWS_AS(SpectralFn::basis(m, 9), TruncationError);
    CHECK_THROWS_AS(m->eval(9, circle_point(0.0)), TruncationError);
}

TEST_CASE("band metadata") {
    const auto m = circle64();
    VectorXc c = VectorXc::Zero(m->size());
    c[CircleModel::index_of(-5)] = 1.0;
    c[CircleModel::index_of(2)] = 2.0;
    const SpectralFn f(m, c);
    CHECK(f.band() == 5.0);
    CHECK(f.norm() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("circle norm from coefficients equals the quadrature norm") {
    const auto m = circle64();
    std::mt19937_64 rng(1);
    for (int t = 0; t < 5; ++t) {
        const SpectralFn f = random_bandlimited(m, 8.0, rng);
        CHECK(f.band() <= 8.0);
        const auto g = synthesize_nodes(f);
        double q = 0.0;
        for (std::size_t i = 0; i < m->node_count(); ++i) q += m->weights()[i] * std::norm(g.values()[i]);
        CHECK(std::abs(std::sqrt(q) - f.norm()) <= 1e-10 * f.norm());
        CHECK(std::abs(lp_norm(g, 2.0) - f.norm()) <= 1e-10 * f.norm());
    }
}

TEST_CASE("multipliers") {
    const auto m = circle64();
    std::mt19937_64 rng(2);
    const SpectralFn f = random_bandlimited(m, 40.0, rng);
    const SpectralFn id = apply_multiplier([](double) { return Complex(1.0); }, 0.5, f);
    CHECK((id.coeffs() - f.coeffs()).cwiseAbs().maxCoeff() == 0.0);

    const Multiplier F1 = [](double x) { return Complex(std::cos(x), 0.3 * x); };
    const Multiplier F2 = [](double x) { return Complex(1.0 / (1.0 + x * x)); };
    const SpectralFn a = apply_multiplier(F2, 0.25, apply_multiplier(F1, 0.25, f));
    const SpectralFn b = apply_multiplier([&](double x) { return F1(x) * F2(x); }, 0.25, f);
    CHECK((a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff() <= 1e-15 * f.coeffs().cwiseAbs().maxCoeff());

    const FilterBank bank(6);
    for (int j = 1; j <= 5; ++j) {
        VectorXc c = VectorXc::Zero(m->size());
        c[CircleModel::index_of(1 << j)] = Complex(0.5, -1.5);
        const SpectralFn pk(m, c);
        CHECK((apply_multiplier(bank.filter(j), 1.0, pk).coeffs() - c).cwiseAbs().maxCoeff() == 0.0);
        const SpectralFn gj = apply_multiplier(bank.squared_filter(j), 1.0, f);
        CHECK(gj.band() <= std::ldexp(1.0, j + 1));
        for (std::size_t l = 0; l < m->size(); ++l)
            if (m->eigenvalue(l) <= std::ldexp(1.0, j - 1)) CHECK(gj.coeffs()[l] == Complex(0.0));
    }
    CHECK_THROWS_AS(apply_multiplier(F1, 0.0, f), PreconditionError);
}

TEST_CASE("Bernstein inequality") {
    const auto s = make_sphere_model(minimal_sphere_config(24));
    std::mt19937_64 rng(3);
    for (double w : {3.0, 10.0, 24.5}) {
        const SpectralFn fc = random_bandlimited(circle64(), w, rng);
        const SpectralFn fs = random_bandlimited(s, w, rng);
        for (int p = 1; p <= 3; ++p) {
            CHECK(bernstein_excess(fc, p) <= 1e-12 * std::pow(fc.band(), p) * fc.norm());
            CHECK(bernstein_excess(fs, p) <= 1e-12 * std::pow(fs.band(), p) * fs.norm());
        }
    }
}

TEST_CASE("Riesz-Boas residual") {
    const auto m = circle64();
    const SpectralFn one = SpectralFn::basis(m, 0);
    for (int K : {1, 4, 16, 64}) CHECK(riesz_boas_residual(one, 4.0, K) == 0.0);
    CHECK(riesz_boas_residual(SpectralFn::zero(m), 4.0, 8) == 0.0);

    const SpectralFn e3 = SpectralFn::basis(m, CircleModel::index_of(3));
    double prev = riesz_boas_residual(e3, 4.0, 4);
    for (int K : {8, 16, 32, 64}) {
        const double r = riesz_boas_residual(e3, 4.0, K);
        // Unpaired series sum over k = -K+1..K as the oracle.
        Complex series = 0.0;
        for (int k = -K + 1; k <= K; ++k) {
            const double hk = k - 0.5;
            const double sign = ((k - 1) % 2 == 0) ? 1.0 : -1.0;
            series += sign / (hk * hk) * std::polar(1.0, kPi / 4.0 * hk * 3.0);
        }
        const double oracle = std::abs(Complex(0.0, 3.0) - 4.0 / (kPi * kPi) * series);
        CHECK(std::abs(r - oracle) <= 1e-12);
        CHECK(r < prev);
        prev = r;
    }
    CHECK_THROWS_AS(riesz_boas_residual(e3, 2.0, 8), PreconditionError);
}

TEST_CASE("JSON round trip") {
    const auto m = make_circle_model({6, 25});
    std::mt19937_64 rng(4);
    const SpectralFn f = random_bandlimited(m, 4.0, rng);
    const SpectralFn g = spectral_fn_from_json(m, to_json(f));
    CHECK((f.coeffs() - g.coeffs()).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(spectral_fn_from_json(m, nlohmann::json::parse(R"([{"l":40,"re":1,"im":0}])")), TruncationError);
}

TEST_CASE("pairwise summation is order-stable") {
    std::vector<double> v(1000);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> nd;
    for (auto& x : v) x = nd(rng);
    const double a = pairwise_sum(v);
    const double b = pairwise_sum(v);
    CHECK(a == b);
    double naive = 0.0;
    for (double x : v) naive += x;
    CHECK(std::abs(a - naive) <= 1e-12);
}

TEST_CASE("L_p norms on the grid") {
    const auto m = circle64();
    const GridFn one(m, VectorXc::Ones(m->node_count()));
    CHECK(lp_norm(one, 1.0) == doctest::Approx(2.0 * kPi));
    CHECK(lp_norm(one, 2.0) == doctest::Approx(std::sqrt(2.0 * kPi)));
    CHECK(lp_norm(one, INFINITY) == 1.0);
    CHECK(lp_norm(one, 3.0) == doctest::Approx(std::pow(2.0 * kPi, 1.0 / 3.0)));
}
