#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "frames/common.hpp"

namespace frames {

// Uniform 3D bucket grid over unit vectors. Queries return a superset of the
// points within a given angle; callers filter with the exact distance.
class SpatialIndex {
public:
    SpatialIndex(std::span<const Point> points, double cell_size);

    template <typename Fn>
    void for_each_candidate(const Point& q, double angle, Fn&& fn) const {
        const double chord = angle >= kPi ? 2.0 : 2.0 * std::sin(0.5 * angle);
        const int R = static_cast<int>(std::ceil(chord / h_)) + 1;
        const double cube = std::pow(2.0 * R + 1.0, 3.0);
        if (cube > static_cast<double>(buckets_.size()) || cube > static_cast<double>(points_.size())) {
            for (std::size_t i = 0; i < points_.size(); ++i) fn(i);
            return;
        }
        const int cx = coord(q.x), cy = coord(q.y), cz = coord(q.z);
        for (int dx = -R; dx <= R; ++dx)
            for (int dy = -R; dy <= R; ++dy)
                for (int dz = -R; dz <= R; ++dz) {
                    const auto it = buckets_.find(key(cx + dx, cy + dy, cz + dz));
                    if (it == buckets_.end()) continue;
                    for (std::uint32_t i : it->second) fn(static_cast<std::size_t>(i));
                }
    }

    std::size_t size() const noexcept { return points_.size(); }

private:
    int coord(double v) const { return static_cast<int>(std::floor((v + 1.0) / h_)); }
    static std::int64_t key(int x, int y, int z) {
        return (static_cast<std::int64_t>(x + 4096) << 26) | (static_cast<std::int64_t>(y + 4096) << 13) | static_cast<std::int64_t>(z + 4096);
    }

    std::span<const Point> points_;
    double h_;
    std::unordered_map<std::int64_t, std::vector<std::uint32_t>> buckets_;
};

}  // namespace frames
