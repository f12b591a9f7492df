// SPDX-License-Identifier: Apache-2.0
#include "wxvis/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace wxvis {

namespace {

// Number of lattice samples that fit along one axis with cell-centered
// alignment. A small relief keeps exact multiples stable under rounding.
std::size_t lattice_count(double extent, double spacing) {
    if (extent < spacing) return 0;
    return static_cast<std::size_t>(std::floor(extent / spacing + 1e-9));
}

} // namespace

std::vector<Node> generate_grid(const GridSpec& spec, const Bvh& bvh) {
    if (spec.spacing <= 0.0) throw std::invalid_argument("grid spacing must be positive");
    if (spec.bounds.degenerate()) throw std::invalid_argument("grid bounds are degenerate");
    if (spec.eye_height < 0.0) throw std::invalid_argument("eye height must be non-negative");

    const double drop_z = spec.drop_height.value_or(bvh.bounds().max.z + 1.0);
    const std::size_t nx = lattice_count(spec.bounds.width(), spec.spacing);
    const std::size_t ny = lattice_count(spec.bounds.height(), spec.spacing);
    const Vec3 down{0.0, 0.0, -1.0};

    std::vector<std::vector<Vec3>> rows(ny);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t iy = 0; iy < static_cast<std::int64_t>(ny); ++iy) {
        auto& row = rows[iy];
        const double y = spec.bounds.min_y + (static_cast<double>(iy) + 0.5) * spec.spacing;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = spec.bounds.min_x + (static_cast<double>(ix) + 0.5) * spec.spacing;
            const auto hits = bvh.raycast_all({x, y, drop_z}, down);
            if (hits.empty()) continue; // over void
            const double support_z = drop_z - hits.front().distance;
            const double lowest_z = drop_z - hits.back().distance;
            if (support_z - lowest_z > spec.walkable_cutoff) continue; // obstacle top
            row.push_back({x, y, support_z + spec.eye_height});
        }
    }

    std::vector<Node> nodes;
    for (const auto& row : rows)
        for (const Vec3& p : row) nodes.push_back({static_cast<std::uint32_t>(nodes.size()), p});
    return nodes;
}

} // namespace wxvis
