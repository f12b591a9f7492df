// SPDX-License-Identifier: Apache-2.0
#include "wxvis/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace wxvis::ref {

namespace {

// Plain nested-loop CSR assembly from a full adjacency list-of-lists.
VisibilityGraph flatten(GraphKind kind, std::span<const Node> nodes,
                        const std::vector<std::vector<std::pair<std::uint32_t, double>>>& adj) {
    VisibilityGraph g;
    g.kind = kind;
    g.positions.reserve(nodes.size());
    for (const Node& node : nodes) g.positions.push_back(node.position);
    g.offsets.assign(nodes.size() + 1, 0);
    for (std::size_t v = 0; v < adj.size(); ++v) g.offsets[v + 1] = g.offsets[v] + adj[v].size();
    g.neighbors.reserve(g.offsets.back());
    g.distances.reserve(g.offsets.back());
    for (const auto& row : adj) {
        for (const auto& [j, d] : row) {
            g.neighbors.push_back(j);
            g.distances.push_back(d);
        }
    }
    return g;
}

void check_dense_ids(std::span<const Node> nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("graph build needs at least 2 nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id != i) throw std::invalid_argument("node ids must be dense and in order");
}

} // namespace

std::optional<RayHit> raycast_linear(const TriangleMesh& mesh, const Vec3& origin,
                                     const Vec3& direction, double max_distance) {
    std::optional<RayHit> best;
    for (std::uint32_t id = 0; id < mesh.triangles.size(); ++id) {
        const auto& tri = mesh.triangles[id];
        const auto t = ray_triangle_intersect(origin, direction, mesh.vertices[tri[0]],
                                              mesh.vertices[tri[1]], mesh.vertices[tri[2]]);
        if (!t || *t <= kSelfOffset || *t > max_distance) continue;
        if (!best || *t < best->distance || (*t == best->distance && id < best->triangle))
            best = RayHit{*t, id};
    }
    return best;
}

bool occluded_linear(const TriangleMesh& mesh, const Vec3& p, const Vec3& q) {
    if (p == q) throw std::invalid_argument("occluded: endpoints must differ");
    const Vec3 delta = q - p;
    const double length = norm(delta);
    if (length <= 2.0 * kSelfOffset) return false;
    const Vec3 dir = delta / length;
    for (const auto& tri : mesh.triangles) {
        const auto t = ray_triangle_intersect(p, dir, mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                              mesh.vertices[tri[2]]);
        if (t && *t >= kSelfOffset && *t <= length - kSelfOffset) return true;
    }
    return false;
}

VisibilityGraph build_visibility_graph_linear(std::span<const Node> nodes,
                                              const TriangleMesh& mesh,
                                              const GraphBuildOptions& options) {
    check_dense_ids(nodes);
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(nodes.size());
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
        for (std::uint32_t j = i + 1; j < nodes.size(); ++j) {
            const Vec3& p = nodes[i].position;
            const Vec3& q = nodes[j].position;
            const double d = norm(q - p);
            if (d == 0.0) throw std::invalid_argument("distinct nodes share a position");
            if (options.max_los_distance && d > *options.max_los_distance) continue;
            if (occluded_linear(mesh, p, q)) continue;
            adj[i].emplace_back(j, d);
            adj[j].emplace_back(i, d);
        }
    }
    return flatten(GraphKind::AllToAll, nodes, adj);
}

VisibilityGraph build_visibility_graph_serial(std::span<const Node> nodes, const Bvh& bvh,
                                              const GraphBuildOptions& options) {
    check_dense_ids(nodes);
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(nodes.size());
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
        for (std::uint32_t j = i + 1; j < nodes.size(); ++j) {
            const Vec3& p = nodes[i].position;
            const Vec3& q = nodes[j].position;
            const double d = norm(q - p);
            if (d == 0.0) throw std::invalid_argument("distinct nodes share a position");
            if (options.max_los_distance && d > *options.max_los_distance) continue;
            if (bvh.occluded(p, q)) continue;
            adj[i].emplace_back(j, d);
            adj[j].emplace_back(i, d);
        }
    }
    return flatten(GraphKind::AllToAll, nodes, adj);
}

std::vector<Node> generate_grid_serial(const GridSpec& spec, const Bvh& bvh) {
    if (spec.spacing <= 0.0) throw std::invalid_argument("grid spacing must be positive");
    if (spec.bounds.degenerate()) throw std::invalid_argument("grid bounds are degenerate");
    if (spec.eye_height < 0.0) throw std::invalid_argument("eye height must be non-negative");

    const double drop_z = spec.drop_height.value_or(bvh.bounds().max.z + 1.0);
    const auto count = [&](double extent) -> std::size_t {
        if (extent < spec.spacing) return 0;
        return static_cast<std::size_t>(std::floor(extent / spec.spacing + 1e-9));
    };
    const std::size_t nx = count(spec.bounds.width());
    const std::size_t ny = count(spec.bounds.height());

    std::vector<Node> nodes;
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const double y = spec.bounds.min_y + (static_cast<double>(iy) + 0.5) * spec.spacing;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = spec.bounds.min_x + (static_cast<double>(ix) + 0.5) * spec.spacing;
            const auto hits = bvh.raycast_all({x, y, drop_z}, {0.0, 0.0, -1.0});
            if (hits.empty()) continue;
            const double support_z = drop_z - hits.front().distance;
            const double lowest_z = drop_z - hits.back().distance;
            if (support_z - lowest_z > spec.walkable_cutoff) continue;
            nodes.push_back({static_cast<std::uint32_t>(nodes.size()),
                             {x, y, support_z + spec.eye_height}});
        }
    }
    return nodes;
}

EdgeWeights weight_edges_serial(const VisibilityGraph& graph,
                                const AttenuationCoefficient& coefficient) {
    if (!std::isfinite(coefficient.sigma) || coefficient.sigma < 0.0)
        throw std::invalid_argument("weight_edges: sigma must be finite and >= 0");
    EdgeWeights w;
    w.sigma = coefficient.sigma;
    w.condition = coefficient.condition;
    w.weights.reserve(graph.distances.size());
    for (const double d : graph.distances) w.weights.push_back(std::exp(-coefficient.sigma * d));
    return w;
}

ScoreField compute_scores_serial(const VisibilityGraph& graph, const EdgeWeights& weights,
                                 AvgNormalization normalization) {
    if (weights.weights.size() != graph.neighbors.size())
        throw std::invalid_argument("weights are not aligned with the graph");
    const std::size_t n = graph.node_count();
    ScoreField field;
    field.sigma = weights.sigma;
    field.condition = weights.condition;
    field.avg_normalization = normalization;
    field.degree.resize(n);
    field.score_sum.resize(n);
    field.score_avg.resize(n);

    std::vector<std::uint8_t> is_target(n, 0);
    for (const std::uint32_t t : graph.targets) is_target[t] = 1;

    for (std::size_t v = 0; v < n; ++v) {
        const std::uint64_t begin = graph.offsets[v];
        const std::uint64_t end = graph.offsets[v + 1];
        field.degree[v] = static_cast<std::uint32_t>(end - begin);
        double acc = 0.0;
        for (std::uint64_t k = begin; k < end; ++k) acc += weights.weights[k];
        field.score_sum[v] = acc;
        double divisor = 0.0;
        if (normalization == AvgNormalization::Neighborhood) {
            divisor = static_cast<double>(field.degree[v]);
        } else if (graph.kind == GraphKind::Subset && !is_target[v]) {
            divisor = static_cast<double>(graph.targets.size());
        } else {
            divisor = static_cast<double>(n - 1);
        }
        field.score_avg[v] = divisor > 0.0 ? acc / divisor : 0.0;
    }
    return field;
}

} // namespace wxvis::ref
