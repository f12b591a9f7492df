// SPDX-License-Identifier: Apache-2.0
#include "wxvis/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wxvis/errors.hpp"

namespace wxvis {

namespace {

constexpr std::uint32_t kLeafSize = 4;

inline Vec3 reciprocal(const Vec3& d) { return {1.0 / d.x, 1.0 / d.y, 1.0 / d.z}; }

inline void check_unit(const Vec3& direction) {
    if (std::abs(norm(direction) - 1.0) > kDirectionTolerance)
        throw std::invalid_argument("ray direction must be unit length");
}

} // namespace

Bvh::Bvh(const TriangleMesh& mesh) {
    if (mesh.empty()) throw InputError("cannot build BVH over an empty mesh");

    std::vector<Tri> source(mesh.triangles.size());
    std::vector<Aabb> boxes(mesh.triangles.size());
    std::vector<Vec3> centroids(mesh.triangles.size());
    std::vector<std::uint32_t> order(mesh.triangles.size());
    for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& [i, j, k] = mesh.triangles[t];
        source[t] = {mesh.vertices[i], mesh.vertices[j], mesh.vertices[k], t};
        Aabb box;
        box.expand(source[t].a);
        box.expand(source[t].b);
        box.expand(source[t].c);
        boxes[t] = box;
        centroids[t] = (box.min + box.max) * 0.5;
        order[t] = t;
    }

    nodes_.reserve(2 * mesh.triangles.size());
    tris_.reserve(mesh.triangles.size());
    build(order, boxes, centroids, 0, static_cast<std::uint32_t>(order.size()), source);
}

std::uint32_t Bvh::build(std::vector<std::uint32_t>& order, std::vector<Aabb>& boxes,
                         std::vector<Vec3>& centroids, std::uint32_t begin, std::uint32_t end,
                         const std::vector<Tri>& source) {
    const auto node_index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();

    Aabb box;
    Aabb centroid_box;
    for (std::uint32_t i = begin; i < end; ++i) {
        box.expand(boxes[order[i]]);
        centroid_box.expand(centroids[order[i]]);
    }
    nodes_[node_index].box = box;

    const std::uint32_t count = end - begin;
    const int axis = centroid_box.longest_axis();
    const double spread = centroid_box.extent()[axis];
    if (count <= kLeafSize || spread <= 0.0) {
        nodes_[node_index].first = static_cast<std::uint32_t>(tris_.size());
        nodes_[node_index].count = count;
        for (std::uint32_t i = begin; i < end; ++i) tris_.push_back(source[order[i]]);
        return node_index;
    }

    const std::uint32_t mid = begin + count / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         if (centroids[a][axis] != centroids[b][axis])
                             return centroids[a][axis] < centroids[b][axis];
                         return a < b;
                     });
    const std::uint32_t left = build(order, boxes, centroids, begin, mid, source);
    const std::uint32_t right = build(order, boxes, centroids, mid, end, source);
    nodes_[node_index].left = left;
    nodes_[node_index].right = right;
    return node_index;
}

std::optional<RayHit> Bvh::raycast(const Vec3& origin, const Vec3& direction,
                                   double max_distance) const {
    check_unit(direction);
    const Vec3 inv = reciprocal(direction);
    double best = max_distance;
    std::int64_t best_tri = -1;

    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (!ray_aabb_intersect(origin, inv, node.box, best)) continue;
        if (node.is_leaf()) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const Tri& tri = tris_[i];
                const auto t = ray_triangle_intersect(origin, direction, tri.a, tri.b, tri.c);
                if (t && *t > kSelfOffset && *t <= best) {
                    best = *t;
                    best_tri = tri.id;
                }
            }
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }
    if (best_tri < 0) return std::nullopt;
    return RayHit{best, static_cast<std::uint32_t>(best_tri)};
}

std::vector<RayHit> Bvh::raycast_all(const Vec3& origin, const Vec3& direction,
                                     double max_distance) const {
    check_unit(direction);
    const Vec3 inv = reciprocal(direction);
    std::vector<RayHit> hits;

    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (!ray_aabb_intersect(origin, inv, node.box, max_distance)) continue;
        if (node.is_leaf()) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const Tri& tri = tris_[i];
                const auto t = ray_triangle_intersect(origin, direction, tri.a, tri.b, tri.c);
                if (t && *t > kSelfOffset && *t <= max_distance)
                    hits.push_back(RayHit{*t, tri.id});
            }
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }
    std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.triangle < b.triangle;
    });
    return hits;
}

bool Bvh::occluded(const Vec3& p, const Vec3& q) const {
    if (p == q) throw std::invalid_argument("occluded: endpoints must differ");
    // Canonical endpoint order makes the result bitwise symmetric.
    const Vec3& lo = lex_less(p, q) ? p : q;
    const Vec3& hi = lex_less(p, q) ? q : p;
    const Vec3 delta = hi - lo;
    const double length = norm(delta);
    if (length <= 2.0 * kSelfOffset) return false; // nothing fits between the offsets
    const Vec3 dir = delta / length;
    const Vec3 inv = reciprocal(dir);
    const double t_max = length - kSelfOffset;

    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (!ray_aabb_intersect(lo, inv, node.box, t_max)) continue;
        if (node.is_leaf()) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const Tri& tri = tris_[i];
                const auto t = ray_triangle_intersect(lo, dir, tri.a, tri.b, tri.c);
                if (t && *t >= kSelfOffset && *t <= t_max) return true;
            }
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }
    return false;
}

bool Bvh::validate() const {
    std::vector<std::uint32_t> seen(tris_.size(), 0);
    for (const Node& node : nodes_) {
        if (node.is_leaf()) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                if (i >= tris_.size()) return false;
                seen[i]++;
                Aabb tri_box;
                tri_box.expand(tris_[i].a);
                tri_box.expand(tris_[i].b);
                tri_box.expand(tris_[i].c);
                if (!node.box.contains(tri_box)) return false;
            }
        } else {
            if (node.left >= nodes_.size() || node.right >= nodes_.size()) return false;
            if (!node.box.contains(nodes_[node.left].box)) return false;
            if (!node.box.contains(nodes_[node.right].box)) return false;
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](std::uint32_t c) { return c == 1; });
}

} // namespace wxvis
