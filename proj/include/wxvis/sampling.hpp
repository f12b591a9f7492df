// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wxvis/bvh.hpp"
#include "wxvis/geometry.hpp"

namespace wxvis {

/// Axis-aligned rectangle in the ground (xy) plane.
struct Rect2 {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    bool degenerate() const { return width() <= 0.0 || height() <= 0.0; }
};

struct GridSpec {
    Rect2 bounds;
    double spacing = 1.0;    // meters between lattice points
    double eye_height = 1.7; // meters above the support surface
    /// Altitude the walkability rays are cast from. Defaults to 1 m above
    /// the top of the scene's bounding box.
    std::optional<double> drop_height;
    /// A lattice column is walkable only if its first (highest) surface hit
    /// is no more than this far above the lowest hit in the same column.
    /// Excludes the tops of extruded obstacles.
    double walkable_cutoff = 0.5; // meters
};

/// A graph vertex: a sampled standing location raised to eye height.
struct Node {
    std::uint32_t id = 0;
    Vec3 position;
};

/// Samples the cell-centered lattice over `spec.bounds` (first sample at
/// bounds minimum + spacing/2), casting one vertical column per lattice
/// point. Emits a node at support height + eye height for every walkable
/// column, in row-major (y-outer, x-inner) order with dense ids. Output is
/// identical under any OpenMP schedule. Returns an empty vector when no
/// column is walkable.
std::vector<Node> generate_grid(const GridSpec& spec, const Bvh& bvh);

} // namespace wxvis
