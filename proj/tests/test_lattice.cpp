#include <doctest.h>

#include <cmath>

#include "frames/circle_model.hpp"
#include "frames/lattice.hpp"
#include "frames/sphere_model.hpp"

using namespace frames;

TEST_CASE("uniform circle lattice") {
    // 17 nodes per gap: no node sits on a cell boundary.
    const auto m = make_circle_model({16, 272});
    const Lattice lat = build_lattice(*m, 2.0 * kPi / 16.0, 3);
    REQUIRE(lat.points.size() == 16);
    std::vector<double> th;
    for (const auto& p : lat.points) th.push_back(std::atan2(p.y, p.x));
    std::sort(th.begin(), th.end());
    for (std::size_t i = 0; i < th.size(); ++i) {
        const double gap = (i + 1 < th.size() ? th[i + 1] : th[0] + 2.0 * kPi) - th[i];
        CHECK(std::abs(gap - 2.0 * kPi / 16.0) <= 1e-12);
    }
    const CellCover cells = build_cells(*m, lat);
    for (double mu : cells.measures) CHECK(std::abs(mu - 2.0 * kPi / 16.0) <= 1e-12);
}

TEST_CASE("sphere lattice at r = 0.4") {
    const auto m = make_sphere_model(minimal_sphere_config(32));
    const double r = 0.4;
    const Lattice lat = build_lattice(*m, r, 11);
    const auto& nodes = m->nodes();
    const std::size_t K = lat.points.size();

    double sep = kPi;
    for (std::size_t a = 0; a < K; ++a)
        for (std::size_t b = a + 1; b < K; ++b) sep = std::min(sep, std::acos(std::clamp(dot(lat.points[a], lat.points[b]), -1.0, 1.0)));
    CHECK(sep >= 0.5 * r - 1e-9);
    CHECK(std::abs(sep - lat.min_separation) <= 1e-7);

    double cover = 0.0;
    int mult = 0;
    for (const auto& x : nodes) {
        double best = kPi;
        int c = 0;
        for (const auto& p : lat.points) {
            const double d = std::acos(std::clamp(dot(x, p), -1.0, 1.0));
            best = std::min(best, d);
            if (d <= r - 1e-9) ++c;
        }
        cover = std::max(cover, best);
        mult = std::max(mult, c);
    }
    CHECK(cover <= 0.5 * r + 1e-9);
    CHECK(lat.multiplicity >= mult);
    // Disjoint r/4 caps inside a 5r/4 cap bound the height of the cover.
    const double packing = (1.0 - std::cos(1.25 * r)) / (1.0 - std::cos(0.25 * r));
    CHECK(lat.multiplicity <= static_cast<int>(packing));
    MESSAGE("sphere r=0.4: points " << K << ", multiplicity " << lat.multiplicity << ", packing bound " << packing);

    const CellCover cells = build_cells(*m, lat);
    double total = 0.0;
    for (double mu : cells.measures) total += mu;
    CHECK(std::abs(total - 4.0 * kPi) <= 1e-12 * 4.0 * kPi);
    for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(m->distance(nodes[i], lat.points[cells.assignment[i]]) <= 0.5 * r + 1e-12);
    const auto [mn, mx] = std::minmax_element(cells.measures.begin(), cells.measures.end());
    CHECK(*mx / *mn <= 4.0);
    CHECK(cells.c1 * r * r == doctest::Approx(*mn));
    CHECK(cells.inner_fraction >= 0.99);
    MESSAGE("cell measure ratio " << *mx / *mn << ", c1 " << cells.c1 << ", c2 " << cells.c2);
}

TEST_CASE("determinism and degenerate radius") {
    const auto m = make_sphere_model(minimal_sphere_config(8));
    const Lattice a = build_lattice(*m, 0.5, 5);
    const Lattice b = build_lattice(*m, 0.5, 5);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.node_index[i] == b.node_index[i]);
    const Lattice big = build_lattice(*m, 7.0, 5);
    CHECK(big.points.size() == 1);
    CHECK(big.degenerate);
    CHECK_FALSE(a.degenerate);
    CHECK_THROWS_AS(build_lattice(*m, 0.0, 1), PreconditionError);
}
