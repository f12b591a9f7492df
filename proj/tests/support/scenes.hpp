// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "wxvis/mesh.hpp"

// In-memory mesh builders and paths to the committed scene files. The
// builders mirror the construction of the committed scenes (quad ground,
// boxes with four sides plus a top and no bottom) so tests can cross-check
// the OBJ loader against an equivalent mesh assembled without parsing.

namespace wxvis::test {

inline std::string scene_path(const std::string& name) {
    return std::string(WXVIS_SCENE_DIR) + "/" + name;
}

inline void add_triangle(TriangleMesh& mesh, const Vec3& a, const Vec3& b, const Vec3& c) {
    const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back(a);
    mesh.vertices.push_back(b);
    mesh.vertices.push_back(c);
    mesh.triangles.push_back({base, base + 1, base + 2});
}

/// Fan-triangulated quad: (a,b,c) + (a,c,d), the loader's rule.
inline void add_quad(TriangleMesh& mesh, const Vec3& a, const Vec3& b, const Vec3& c,
                     const Vec3& d) {
    add_triangle(mesh, a, b, c);
    add_triangle(mesh, a, c, d);
}

inline TriangleMesh make_ground(double x0, double y0, double x1, double y1, double z = 0.0) {
    TriangleMesh mesh;
    add_quad(mesh, {x0, y0, z}, {x1, y0, z}, {x1, y1, z}, {x0, y1, z});
    return mesh;
}

inline void add_box(TriangleMesh& mesh, double x0, double y0, double x1, double y1, double z0,
                    double z1) {
    // Walk around the four sides, then the top; no bottom face.
    add_quad(mesh, {x0, y0, z0}, {x1, y0, z0}, {x1, y0, z1}, {x0, y0, z1});
    add_quad(mesh, {x1, y0, z0}, {x1, y1, z0}, {x1, y1, z1}, {x1, y0, z1});
    add_quad(mesh, {x1, y1, z0}, {x0, y1, z0}, {x0, y1, z1}, {x1, y1, z1});
    add_quad(mesh, {x0, y1, z0}, {x0, y0, z0}, {x0, y0, z1}, {x0, y1, z1});
    add_quad(mesh, {x0, y0, z1}, {x1, y0, z1}, {x1, y1, z1}, {x0, y1, z1});
}

inline TriangleMesh random_triangle_soup(unsigned count, std::uint32_t seed,
                                         double extent = 10.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> pos(-extent, extent);
    std::uniform_real_distribution<double> leg(0.2, 2.0);
    TriangleMesh mesh;
    for (unsigned i = 0; i < count; ++i) {
        const Vec3 a{pos(rng), pos(rng), pos(rng)};
        const Vec3 b = a + Vec3{leg(rng), leg(rng) * 0.25, leg(rng)};
        const Vec3 c = a + Vec3{leg(rng) * 0.25, leg(rng), leg(rng) * 0.5};
        add_triangle(mesh, a, b, c);
    }
    return mesh;
}

} // namespace wxvis::test
