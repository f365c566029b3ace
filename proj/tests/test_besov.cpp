#include <doctest.h>

#include <cmath>
#include <random>

#include "frames/besov.hpp"
#include "frames/circle_model.hpp"
#include "frames/sphere_model.hpp"

using namespace frames;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Setup {
    ModelPtr model = make_sphere_model({16, 129, 257});
    FilterBank bank{3};
    Frame frame;
    std::vector<Lattice> lattices;
    Setup() {
        const auto fine = make_sphere_model({32, 193, 385});
        frame = build_parseval(model, bank, build_parseval_rules(*fine, *model, bank, 3.0, 40));
        for (int j = 0; j <= 3; ++j) lattices.push_back(build_lattice(*model, 1.5 * std::ldexp(1.0, -j), 60 + static_cast<std::uint64_t>(j)));
    }
    BesovContext ctx() const { return {&frame, &lattices}; }
};

const Setup& setup() {
    static const Setup s;
    return s;
}

}  // namespace

TEST_CASE("parameter validation and mode names") {
    CHECK_THROWS_AS(validate({0.0, 2.0, 2.0, 3}), ConfigError);
    CHECK_THROWS_AS(validate({1.0, 0.5, 2.0, 3}), ConfigError);
    CHECK_THROWS_AS(validate({1.0, 2.0, 0.0, 3}), ConfigError);
    CHECK_THROWS_AS(validate({1.0, 2.0, 2.0, 0}), ConfigError);
    CHECK_NOTHROW(validate({1.0, kInf, kInf, 1}));
    for (auto m : {BesovMode::approx, BesovMode::lp_block, BesovMode::frame, BesovMode::sampling, BesovMode::sphere_l2})
        CHECK(besov_mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(besov_mode_from_string("modulus"), ConfigError);
}

TEST_CASE("zero function has zero norm in every mode") {
    const auto& s = setup();
    const SpectralFn z = SpectralFn::zero(s.model);
    const BesovParams b{1.5, 2.0, 2.0, 3};
    for (auto m : applicable_modes(*s.model, s.ctx(), b)) CHECK(besov_norm(s.bank, s.ctx(), z, b, m) == 0.0);
    CHECK(applicable_modes(*s.model, s.ctx(), b).size() == 5);
}

TEST_CASE("sphere_l2 of a spherical harmonic") {
    const auto& s = setup();
    const auto sm = std::static_pointer_cast<const SphereModel>(s.model);
    for (int l : {0, 3, 9, 16})
        for (double alpha : {0.5, 1.5}) {
            const SpectralFn y = SpectralFn::basis(s.model, sm->index_of(l, -l / 2));
            CHECK(besov_norm(s.bank, {}, y, {alpha, 2.0, 2.0, 3}, BesovMode::sphere_l2) == doctest::Approx(std::pow(l + 1.0, alpha)).epsilon(1e-14));
        }
    const auto circle = make_circle_model({8, 40});
    CHECK_THROWS_AS(besov_norm(s.bank, {}, SpectralFn::basis(circle, 1), {1.0, 2.0, 2.0, 2}, BesovMode::sphere_l2), PreconditionError);
    CHECK_THROWS_AS(besov_norm(s.bank, {}, SpectralFn::basis(s.model, 1), {1.0, 1.0, 2.0, 2}, BesovMode::sphere_l2), PreconditionError);
    CHECK_THROWS_AS(besov_norm(s.bank, {}, SpectralFn::basis(s.model, 1), {1.0, 2.0, 2.0, 2}, BesovMode::frame), PreconditionError);
    CHECK_THROWS_AS(besov_norm(s.bank, {}, SpectralFn::basis(s.model, 1), {1.0, 2.0, 2.0, 2}, BesovMode::sampling), PreconditionError);
}

TEST_CASE("lp_block norm of one eigenfunction from the filters") {
    const auto& s = setup();
    const double alpha = 1.5;
    for (std::size_t idx : {0u, 5u, 30u, 100u, 250u}) {
        const double lam = s.model->eigenvalue(idx);
        double blocks = 0.0;
        int nonzero = 0;
        for (int j = 0; j <= 3; ++j) {
            const double gj = FilterBank::h(lam / std::ldexp(1.0, j));
            const double G = j == 0 ? FilterBank::g(lam) : gj;
            if (G != 0.0) ++nonzero;
            blocks += std::pow(std::pow(2.0, j * alpha) * G, 2);
        }
        CHECK(nonzero <= 2);
        const double oracle = 1.0 + std::sqrt(blocks);
        const double v = besov_norm(s.bank, {}, SpectralFn::basis(s.model, idx), {alpha, 2.0, 2.0, 3}, BesovMode::lp_block);
        CHECK(v == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("truncation stability past the band") {
    const auto& s = setup();
    std::mt19937_64 rng(1);
    const SpectralFn f = random_bandlimited(s.model, 6.0, rng);
    // Band 6 lies below 2^3, so blocks j >= 4 vanish.
    for (int J : {4, 5, 6}) {
        CHECK(besov_norm(s.bank, {}, f, {1.5, 2.0, 2.0, J}, BesovMode::lp_block) ==
              besov_norm(s.bank, {}, f, {1.5, 2.0, 2.0, 3}, BesovMode::lp_block));
        CHECK(besov_norm(s.bank, {}, f, {1.5, 2.0, 2.0, J}, BesovMode::sphere_l2) ==
              besov_norm(s.bank, {}, f, {1.5, 2.0, 2.0, 3}, BesovMode::sphere_l2));
    }
}

TEST_CASE("approximation proxy brackets the exact L2 distance") {
    const auto& s = setup();
    std::mt19937_64 rng(2);
    for (int i = 0; i < 5; ++i) {
        const SpectralFn f = random_bandlimited(s.model, s.model->max_eigenvalue(), rng);
        for (double omega : {2.0, 4.0, 8.0, 16.0}) {
            const double proxy = approximation_error(s.bank, f, omega, 2.0);
            CHECK(l2_tail(f, omega) <= proxy * (1.0 + 1e-12));
            CHECK(proxy <= l2_tail(f, omega / 2.0) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("q = infinity takes the largest level term") {
    const auto& s = setup();
    std::mt19937_64 rng(3);
    const SpectralFn f = random_bandlimited(s.model, 16.0, rng);
    const BesovParams b{1.0, 2.0, kInf, 3};
    double top = 0.0;
    for (int j = 0; j <= 3; ++j) {
        const SpectralFn gj = apply_multiplier(s.bank.squared_filter(j), 1.0, f);
        top = std::max(top, std::pow(2.0, j) * gj.norm());
    }
    CHECK(besov_norm(s.bank, {}, f, b, BesovMode::lp_block) == doctest::Approx(f.norm() + top).epsilon(1e-12));
}

TEST_CASE("equivalence report on a small family") {
    const auto& s = setup();
    std::mt19937_64 rng(4);
    std::vector<SpectralFn> family;
    for (int i = 0; i < 10; ++i) family.push_back(random_bandlimited(s.model, std::ldexp(1.0, 1 + i % 4), rng));
    const EquivalenceReport rep = equivalence_report(s.bank, s.ctx(), family, {1.5, 2.0, 2.0, 3});
    CHECK(rep.modes.size() == 5);
    for (double d : rep.homogeneity_defect) CHECK(d <= 1e-12);
    CHECK(rep.max_spread <= 10.0);
    MESSAGE("max ratio spread " << rep.max_spread);
}

TEST_CASE("dyadic shift law of the lp_block norm") {
    const auto m = make_sphere_model(minimal_sphere_config(32));
    const FilterBank bank(6);
    const double alpha = 1.5;
    std::vector<double> scales, norms;
    for (int j = 2; j <= 5; ++j) {
        scales.push_back(std::ldexp(1.0, j));
        norms.push_back(besov_norm(bank, {}, dyadic_profile(m, j, 17), {alpha, 2.0, 2.0, 6}, BesovMode::lp_block));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        const double x = std::log2(scales[i]), y = std::log2(norms[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double n = static_cast<double>(norms.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    MESSAGE("dyadic slope " << slope);
    CHECK(std::abs(slope - alpha) <= 0.05 * alpha);
}
