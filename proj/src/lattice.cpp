#include "frames/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "frames/reduce.hpp"
#include "frames/spatial_index.hpp"

namespace frames {

namespace {

double cell_size_for(double r) { return std::max(2.0 * std::sin(std::min(0.25 * r, 0.5 * kPi)), 1e-3); }

struct Candidate {
    double key;
    std::size_t index;
};

// Larger key first; lower index first on equal keys.
struct CandidateOrder {
    bool operator()(const Candidate& a, const Candidate& b) const {
        if (a.key != b.key) return a.key < b.key;
        return a.index > b.index;
    }
};

// Nearest point by angle within radius (ties to the lowest index); full scan if none is found.
std::size_t nearest_point(const Point& p, const std::vector<Point>& pts, const SpatialIndex& index, double radius, double& dist) {
    std::size_t best = pts.size();
    dist = std::numeric_limits<double>::infinity();
    auto visit = [&](std::size_t k) {
        const double d = angle_between(p, pts[k]);
        if (d < dist || (d == dist && k < best)) {
            dist = d;
            best = k;
        }
    };
    index.for_each_candidate(p, radius, visit);
    if (best == pts.size() || dist > radius)
        for (std::size_t k = 0; k < pts.size(); ++k) visit(k);
    return best;
}

}  // namespace

Lattice build_lattice(const SpectralModel& model, double r, std::uint64_t seed) {
    if (!(r > 0.0)) throw PreconditionError("build_lattice: r must be positive");
    const auto& nodes = model.nodes();
    const std::size_t n = nodes.size();
    if (n == 0) throw PreconditionError("build_lattice: model has no quadrature nodes");

    Lattice lat;
    lat.r = r;
    lat.seed = seed;
    lat.degenerate = r >= kPi;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t start = pick(rng);

    const SpatialIndex node_index(nodes, cell_size_for(r));
    const double half = 0.5 * r;
    std::vector<double> key(n);
    std::vector<Candidate> heap_store;
    heap_store.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        key[i] = angle_between(nodes[i], nodes[start]);
        heap_store.push_back({key[i], i});
    }
    std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> heap(CandidateOrder{}, std::move(heap_store));
    lat.points.push_back(nodes[start]);
    lat.node_index.push_back(start);
    key[start] = 0.0;

    while (!heap.empty()) {
        const Candidate c = heap.top();
        heap.pop();
        if (c.key != key[c.index]) continue;
        if (c.key <= half * (1.0 + 1e-12)) break;
        const Point q = nodes[c.index];
        lat.points.push_back(q);
        lat.node_index.push_back(c.index);
        key[c.index] = 0.0;
        // Only nodes closer to q than the current farthest distance can change.
        node_index.for_each_candidate(q, c.key, [&](std::size_t j) {
            const double d = angle_between(nodes[j], q);
            if (d < key[j]) {
                key[j] = d;
                heap.push({d, j});
            }
        });
    }
    lat.covering_radius = *std::max_element(key.begin(), key.end());

    const std::size_t K = lat.points.size();
    const SpatialIndex point_index(lat.points, cell_size_for(r));
    double sep = kPi;
    for (std::size_t a = 0; a < K; ++a) {
        bool found = false;
        point_index.for_each_candidate(lat.points[a], 1.01 * r, [&](std::size_t b) {
            if (b == a) return;
            const double d = angle_between(lat.points[a], lat.points[b]);
            if (d <= 1.01 * r) found = true;
            sep = std::min(sep, d);
        });
        if (!found)
            for (std::size_t b = 0; b < K; ++b)
                if (b != a) sep = std::min(sep, angle_between(lat.points[a], lat.points[b]));
    }
    lat.min_separation = sep;

    int mult = 0;
#pragma omp parallel for reduction(max : mult) schedule(static) num_threads(worker_threads())
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        int c = 0;
        point_index.for_each_candidate(nodes[i], r, [&](std::size_t k) {
            if (angle_between(nodes[i], lat.points[k]) <= r) ++c;
        });
        mult = std::max(mult, c);
    }
    lat.multiplicity = mult;
    return lat;
}

CellCover build_cells(const SpectralModel& model, const Lattice& lattice) {
    const auto& nodes = model.nodes();
    const auto& w = model.weights();
    const std::size_t n = nodes.size();
    const std::size_t K = lattice.points.size();
    if (K == 0) throw PreconditionError("build_cells: empty lattice");
    const SpatialIndex index(lattice.points, cell_size_for(lattice.r));
    const double radius = std::max(0.5 * lattice.r, lattice.covering_radius) * (1.0 + 1e-9);

    CellCover cells;
    cells.assignment.resize(n);
    std::vector<double> dist(n);
#pragma omp parallel for schedule(static) num_threads(worker_threads())
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        cells.assignment[i] = nearest_point(nodes[i], lattice.points, index, radius, dist[i]);

    std::vector<std::vector<double>> parts(K);
    for (std::size_t i = 0; i < n; ++i) parts[cells.assignment[i]].push_back(w[i]);
    cells.measures.resize(K);
    for (std::size_t k = 0; k < K; ++k) cells.measures[k] = pairwise_sum(parts[k]);
    cells.max_cell_radius = *std::max_element(dist.begin(), dist.end());

    // Share of (node, k) pairs with d(node, x_k) < r/4 whose node sits in cell k.
    const double quarter = 0.25 * lattice.r;
    std::size_t inner = 0, inner_hit = 0;
#pragma omp parallel for reduction(+ : inner, inner_hit) schedule(static) num_threads(worker_threads())
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        index.for_each_candidate(nodes[i], quarter, [&](std::size_t k) {
            if (angle_between(nodes[i], lattice.points[k]) >= quarter) return;
            ++inner;
            if (cells.assignment[i] == k) ++inner_hit;
        });
    }
    cells.inner_fraction = inner == 0 ? 1.0 : static_cast<double>(inner_hit) / static_cast<double>(inner);

    const double rn = std::pow(lattice.r, model.dimension());
    const auto [mn, mx] = std::minmax_element(cells.measures.begin(), cells.measures.end());
    cells.c1 = *mn / rn;
    cells.c2 = *mx / rn;
    return cells;
}

}  // namespace frames
