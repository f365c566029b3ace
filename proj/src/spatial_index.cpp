#include "frames/spatial_index.hpp"

#include <algorithm>

namespace frames {

SpatialIndex::SpatialIndex(std::span<const Point> points, double cell_size) : points_(points) {
    // Cap the grid at 2048 cells per axis so keys stay unique.
    h_ = std::max(cell_size, 2.0 / 2048.0);
    for (std::size_t i = 0; i < points.size(); ++i)
        buckets_[key(coord(points[i].x), coord(points[i].y), coord(points[i].z))].push_back(static_cast<std::uint32_t>(i));
}

}  // namespace frames
