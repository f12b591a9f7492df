// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wxvis/geometry.hpp"
#include "wxvis/mesh.hpp"

namespace wxvis {

struct RayHit {
    double distance = 0.0; // meters along the (unit) ray direction
    std::uint32_t triangle = 0;
};

/// Bounding volume hierarchy over a triangle mesh. The builder copies the
/// triangle data it needs, so the Bvh is self-contained and immutable after
/// construction; concurrent read-only queries are safe.
class Bvh {
  public:
    /// Throws InputError if the mesh has no triangles.
    explicit Bvh(const TriangleMesh& mesh);

    /// Closest hit with distance in (kSelfOffset, max_distance], or nothing.
    /// `direction` must be unit length within kDirectionTolerance.
    std::optional<RayHit> raycast(const Vec3& origin, const Vec3& direction,
                                  double max_distance = kInfinity) const;

    /// Every hit with distance in (kSelfOffset, max_distance], sorted by
    /// distance. Used for walkability columns, where all surfaces stacked
    /// under a sample point matter.
    std::vector<RayHit> raycast_all(const Vec3& origin, const Vec3& direction,
                                    double max_distance = kInfinity) const;

    /// True iff any triangle intersects the open segment (p, q), with
    /// kSelfOffset clearance at both endpoints. Symmetric in p and q.
    bool occluded(const Vec3& p, const Vec3& q) const;

    const Aabb& bounds() const { return nodes_[0].box; }
    std::size_t triangle_count() const { return tris_.size(); }
    std::size_t node_count() const { return nodes_.size(); }

    /// Structural checks used by tests: every triangle in exactly one leaf,
    /// child boxes contained in their parent box.
    bool validate() const;

  private:
    struct Node {
        Aabb box;
        // Interior: child indices. Leaf: first/count into tris_.
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        std::uint32_t first = 0;
        std::uint32_t count = 0; // 0 for interior nodes
        bool is_leaf() const { return count != 0; }
    };
    struct Tri {
        Vec3 a, b, c;
        std::uint32_t id; // index into the source mesh
    };

    std::uint32_t build(std::vector<std::uint32_t>& order, std::vector<Aabb>& boxes,
                        std::vector<Vec3>& centroids, std::uint32_t begin, std::uint32_t end,
                        const std::vector<Tri>& source);

    template <typename Visit>
    void traverse(const Vec3& origin, const Vec3& dir, double t_max, Visit&& visit) const;

    std::vector<Node> nodes_;
    std::vector<Tri> tris_; // leaf-ordered
};

} // namespace wxvis
