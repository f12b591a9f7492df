// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wxvis/bvh.hpp"
#include "wxvis/mesh.hpp"
#include "wxvis/sampling.hpp"
#include "wxvis/visgraph.hpp"

// Reference implementations of the parallel kernels. The *_serial variants
// run the production algorithms single-threaded; the *_linear variants also
// bypass the BVH and scan every triangle. They live in a separate library
// that only the tests and the benchmark link, so the production binary
// cannot accidentally depend on them. Outputs must match the production
// kernels exactly; the benchmark measures what the parallel versions buy.

namespace wxvis::ref {

/// Closest hit with distance in (kSelfOffset, max_distance], by exhaustive
/// scan. Ties on distance resolve to the lowest triangle id.
std::optional<RayHit> raycast_linear(const TriangleMesh& mesh, const Vec3& origin,
                                     const Vec3& direction, double max_distance = kInfinity);

/// Segment occlusion with kSelfOffset endpoint clearance, exhaustive scan.
bool occluded_linear(const TriangleMesh& mesh, const Vec3& p, const Vec3& q);

/// All-pairs graph from occluded_linear, assembled with plain nested loops.
VisibilityGraph build_visibility_graph_linear(std::span<const Node> nodes,
                                              const TriangleMesh& mesh,
                                              const GraphBuildOptions& options = {});

/// Production pair enumeration against the BVH, single thread.
VisibilityGraph build_visibility_graph_serial(std::span<const Node> nodes, const Bvh& bvh,
                                              const GraphBuildOptions& options = {});

/// Single-threaded lattice walk with the same per-column arithmetic as
/// generate_grid.
std::vector<Node> generate_grid_serial(const GridSpec& spec, const Bvh& bvh);

EdgeWeights weight_edges_serial(const VisibilityGraph& graph,
                                const AttenuationCoefficient& coefficient);

ScoreField compute_scores_serial(const VisibilityGraph& graph, const EdgeWeights& weights,
                                 AvgNormalization normalization = AvgNormalization::Neighborhood);

} // namespace wxvis::ref
