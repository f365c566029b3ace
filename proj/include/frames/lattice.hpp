#pragma once

#include <cstdint>
#include <vector>

#include "frames/spectral_model.hpp"

namespace frames {

// r/2-separated set of quadrature nodes whose r/2-balls cover every node.
struct Lattice {
    double r = 0.0;
    std::uint64_t seed = 0;
    std::vector<Point> points;
    std::vector<std::size_t> node_index;  // source quadrature node of each point
    int multiplicity = 0;                 // max number of points within r of a node
    double min_separation = 0.0;          // observed
    double covering_radius = 0.0;         // observed max node-to-lattice distance
    bool degenerate = false;              // r at or beyond the injectivity scale
};

struct CellCover {
    std::vector<std::size_t> assignment;  // node -> lattice index
    std::vector<double> measures;         // |U_k|
    double max_cell_radius = 0.0;         // max distance of a node to its cell center
    double inner_fraction = 1.0;          // share of B(x_k, r/4) nodes landing in cell k
    double c1 = 0.0;                      // min |U_k| / r^n
    double c2 = 0.0;                      // max |U_k| / r^n
};

// Greedy farthest-point selection over the quadrature nodes with threshold r/2;
// the start node is drawn from seed.
Lattice build_lattice(const SpectralModel& model, double r, std::uint64_t seed);

// Nearest-point cells (ties to the lowest lattice index) measured with quadrature weights.
CellCover build_cells(const SpectralModel& model, const Lattice& lattice);

}  // namespace frames
