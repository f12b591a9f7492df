// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

namespace wxvis {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Offset along a ray (or from a segment endpoint) below which hits are
/// ignored, so that queries starting on a surface do not hit it again.
inline constexpr double kSelfOffset = 1e-4; // meters

/// Allowed deviation of a ray direction from unit length.
inline constexpr double kDirectionTolerance = 1e-6;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr bool operator==(const Vec3&) const = default;

    constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

inline bool is_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Lexicographic order on (x, y, z); used to canonicalize symmetric queries.
constexpr bool lex_less(const Vec3& a, const Vec3& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
}

struct Aabb {
    Vec3 min{kInfinity, kInfinity, kInfinity};
    Vec3 max{-kInfinity, -kInfinity, -kInfinity};

    void expand(const Vec3& p) {
        min = {std::min(min.x, p.x), std::min(min.y, p.y), std::min(min.z, p.z)};
        max = {std::max(max.x, p.x), std::max(max.y, p.y), std::max(max.z, p.z)};
    }
    void expand(const Aabb& b) {
        expand(b.min);
        expand(b.max);
    }
    bool contains(const Aabb& b) const {
        return b.min.x >= min.x && b.min.y >= min.y && b.min.z >= min.z && b.max.x <= max.x &&
               b.max.y <= max.y && b.max.z <= max.z;
    }
    Vec3 extent() const { return max - min; }
    int longest_axis() const {
        const Vec3 e = extent();
        if (e.x >= e.y && e.x >= e.z) return 0;
        return e.y >= e.z ? 1 : 2;
    }
};

/// Slab test. `inv_dir` is the componentwise reciprocal of the ray direction
/// (infinities for zero components are handled by IEEE semantics). Exit times
/// carry a few ulps of slack so rounding cannot prune a ray that exactly
/// grazes a box face or edge; the triangle test stays the final arbiter.
inline bool ray_aabb_intersect(const Vec3& origin, const Vec3& inv_dir, const Aabb& box,
                               double t_max) {
    constexpr double kSlabSlack = 1.0 + 4e-15;
    double t0 = 0.0;
    double t1 = t_max;
    for (int axis = 0; axis < 3; ++axis) {
        double near = (box.min[axis] - origin[axis]) * inv_dir[axis];
        double far = (box.max[axis] - origin[axis]) * inv_dir[axis];
        if (near > far) std::swap(near, far);
        if (near > t0) t0 = near;
        if (far * kSlabSlack < t1) t1 = far * kSlabSlack;
        if (t0 > t1) return false;
    }
    return true;
}

/// Moller-Trumbore with epsilon-guarded determinant and inclusive barycentric
/// bounds, so shared-edge hits are reported by the adjacent triangles rather
/// than slipping through a crack. Returns the ray parameter t, or nothing.
inline std::optional<double> ray_triangle_intersect(const Vec3& origin, const Vec3& dir,
                                                    const Vec3& a, const Vec3& b, const Vec3& c) {
    constexpr double kDetEpsilon = 1e-12;
    constexpr double kBaryEpsilon = 1e-9;
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 p = cross(dir, e2);
    const double det = dot(e1, p);
    if (std::abs(det) < kDetEpsilon) return std::nullopt; // parallel or degenerate
    const double inv_det = 1.0 / det;
    const Vec3 s = origin - a;
    const double u = dot(s, p) * inv_det;
    if (u < -kBaryEpsilon || u > 1.0 + kBaryEpsilon) return std::nullopt;
    const Vec3 q = cross(s, e1);
    const double v = dot(dir, q) * inv_det;
    if (v < -kBaryEpsilon || u + v > 1.0 + kBaryEpsilon) return std::nullopt;
    const double t = dot(e2, q) * inv_det;
    if (t < 0.0) return std::nullopt;
    return t;
}

} // namespace wxvis
