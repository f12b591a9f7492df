// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wxvis/attenuation.hpp"
#include "wxvis/bvh.hpp"
#include "wxvis/sampling.hpp"

namespace wxvis {

enum class GraphKind : std::uint8_t {
    AllToAll = 0, // every unordered node pair was tested
    Subset = 1,   // only pairs with at least one endpoint in `targets`
};

struct GraphBuildOptions {
    /// Pairs farther apart than this are skipped without a raycast.
    /// Unset means no culling; acceptance runs leave it unset.
    std::optional<double> max_los_distance;
};

/// Undirected line-of-sight graph in compressed sparse form. Neighbor ids
/// of each node are sorted ascending; every edge appears in both endpoint
/// rows with the identical stored distance. Distances are the canonical
/// per-edge quantity so any attenuation coefficient is a cheap element-wise
/// pass with no new raycasts.
struct VisibilityGraph {
    GraphKind kind = GraphKind::AllToAll;
    std::vector<Vec3> positions;          // indexed by node id
    std::vector<std::uint64_t> offsets;   // size n+1
    std::vector<std::uint32_t> neighbors; // directed arcs, 2x edge count
    std::vector<double> distances;        // aligned with neighbors
    std::vector<std::uint32_t> targets;   // Subset only; sorted, unique

    std::size_t node_count() const { return positions.size(); }
    std::size_t edge_count() const { return neighbors.size() / 2; }

    std::span<const std::uint32_t> neighbors_of(std::uint32_t v) const {
        return {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1]};
    }
    std::span<const double> distances_of(std::uint32_t v) const {
        return {distances.data() + offsets[v], distances.data() + offsets[v + 1]};
    }
    bool has_edge(std::uint32_t a, std::uint32_t b) const;
};

/// Tests every unordered pair of nodes for line of sight against the BVH.
/// Nodes must be densely numbered (node.id == index). Requires >= 2 nodes.
/// The pair space is split across OpenMP workers and merged in canonical
/// (i < j, ascending) order, so the result is identical under any schedule.
VisibilityGraph build_visibility_graph(std::span<const Node> nodes, const Bvh& bvh,
                                       const GraphBuildOptions& options = {});

/// Restricted pair space: edges e_ij with v_i in the source set and v_j in
/// the target set (self-pairs skipped, each unordered pair tested once).
/// Both sets index into `nodes` and must be non-empty. The returned graph
/// spans all of `nodes`; ids outside both sets simply have no edges.
VisibilityGraph build_subset_graph(std::span<const Node> nodes,
                                   std::span<const std::uint32_t> source_ids,
                                   std::span<const std::uint32_t> target_ids, const Bvh& bvh,
                                   const GraphBuildOptions& options = {});

/// Common case: every node is a source, so the graph records the target
/// set alone. Equivalent to passing all ids as sources.
VisibilityGraph build_subset_graph(std::span<const Node> nodes,
                                   std::span<const std::uint32_t> target_ids, const Bvh& bvh,
                                   const GraphBuildOptions& options = {});

/// Per-arc weights exp(-sigma * distance), aligned with graph.neighbors.
struct EdgeWeights {
    std::vector<double> weights;
    double sigma = 0.0;
    WeatherCondition condition; // provenance
};

/// Element-wise weight pass over the stored distances. Never mutates the
/// graph; re-weighting under another condition reuses the same geometry.
EdgeWeights weight_edges(const VisibilityGraph& graph, const AttenuationCoefficient& coefficient);

/// Divisor for the per-node average score.
enum class AvgNormalization : std::uint8_t {
    /// Mean over the node's actual neighbors: S_A = S_S / deg.
    Neighborhood = 0,
    /// S_S divided by the number of candidate counterparts the build
    /// considered, visible or not: n-1 for an all-to-all graph; for a
    /// subset graph, n-1 for a target node and |targets \ {v}| otherwise
    /// (assumes every node was a source, as build_subset_graph's
    /// two-argument form guarantees).
    CandidateSet = 1,
};

/// Per-node reduction of a weighted graph. Isolated nodes score 0.
struct ScoreField {
    std::vector<std::uint32_t> degree;
    std::vector<double> score_sum; // S_S: sum of incident edge weights
    std::vector<double> score_avg; // S_A: normalized per avg_normalization
    double sigma = 0.0;
    WeatherCondition condition;
    AvgNormalization avg_normalization = AvgNormalization::Neighborhood;
};

std::vector<std::uint32_t> degree(const VisibilityGraph& graph);
std::vector<double> score_sum(const VisibilityGraph& graph, const EdgeWeights& weights);
std::vector<double> score_avg(const VisibilityGraph& graph, const EdgeWeights& weights,
                              AvgNormalization normalization = AvgNormalization::Neighborhood);

ScoreField compute_scores(const VisibilityGraph& graph, const EdgeWeights& weights,
                          AvgNormalization normalization = AvgNormalization::Neighborhood);

} // namespace wxvis
