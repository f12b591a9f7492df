// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "wxvis/geometry.hpp"

namespace wxvis {

/// Immutable triangulated scene geometry. Units are meters, z-up.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    /// Zero-area faces dropped while loading.
    std::size_t degenerate_dropped = 0;

    bool empty() const { return triangles.empty(); }
    Aabb bounds() const;
    double triangle_area(std::size_t t) const;
};

/// Parses a Wavefront OBJ. Only `v` and `f` records are consumed; normals,
/// texture coordinates, materials and groups are ignored. Faces with more
/// than three vertices are fan-triangulated. Degenerate (zero-area) faces
/// are dropped and counted in `degenerate_dropped`.
///
/// Throws InputError on a missing file, on a malformed record (message
/// carries the 1-based line number), or if no triangles survive loading.
TriangleMesh load_obj(const std::filesystem::path& path);

} // namespace wxvis
