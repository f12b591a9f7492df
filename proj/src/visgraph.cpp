// SPDX-License-Identifier: Apache-2.0
#include "wxvis/visgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace wxvis {

namespace {

// Upper-triangle adjacency of one node (neighbor ids all greater than the
// row's own id), the unit of parallel work during construction.
struct UpperRow {
    std::vector<std::uint32_t> ids;
    std::vector<double> dists;
};

void check_nodes(std::span<const Node> nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("graph build needs at least 2 nodes");
    if (nodes.size() > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("node count exceeds the 32-bit id space");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id != i)
            throw std::invalid_argument("node ids must be dense and in order");
        if (!is_finite(nodes[i].position))
            throw std::invalid_argument("node positions must be finite");
    }
}

std::vector<std::uint32_t> sorted_unique_ids(std::span<const std::uint32_t> ids,
                                             std::size_t node_count, const char* what) {
    if (ids.empty()) throw std::invalid_argument(std::string(what) + " set is empty");
    std::vector<std::uint32_t> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.back() >= node_count)
        throw std::invalid_argument(std::string(what) + " id out of range");
    return out;
}

// Serial merge of the per-node upper rows into a symmetric CSR. Iterating
// rows in ascending id order keeps every adjacency list sorted: node k
// first receives its mirror arcs (from rows i < k, ascending) and then its
// own upper arcs (all > k, ascending). Mirrors copy the stored distance
// bit for bit, which is what makes the symmetry exact.
VisibilityGraph assemble(GraphKind kind, std::span<const Node> nodes,
                         const std::vector<UpperRow>& rows, std::vector<std::uint32_t> targets) {
    const std::size_t n = nodes.size();
    VisibilityGraph g;
    g.kind = kind;
    g.targets = std::move(targets);
    g.positions.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.positions[i] = nodes[i].position;

    g.offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        g.offsets[i + 1] += rows[i].ids.size();
        for (const std::uint32_t j : rows[i].ids) g.offsets[j + 1] += 1;
    }
    std::partial_sum(g.offsets.begin(), g.offsets.end(), g.offsets.begin());

    g.neighbors.resize(g.offsets[n]);
    g.distances.resize(g.offsets[n]);
    std::vector<std::uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const UpperRow& row = rows[i];
        for (std::size_t k = 0; k < row.ids.size(); ++k) {
            const std::uint32_t j = row.ids[k];
            const double d = row.dists[k];
            g.neighbors[cursor[i]] = j;
            g.distances[cursor[i]++] = d;
            g.neighbors[cursor[j]] = static_cast<std::uint32_t>(i);
            g.distances[cursor[j]++] = d;
        }
    }
    return g;
}

// Tests one canonical pair and appends it to the row on a clear sight line.
// Returns false only for coincident nodes, which the caller turns into an
// error once outside the parallel region.
bool test_pair(UpperRow& row, std::span<const Node> nodes, std::uint32_t i, std::uint32_t j,
               const Bvh& bvh, const GraphBuildOptions& options) {
    const Vec3& p = nodes[i].position;
    const Vec3& q = nodes[j].position;
    const double d = norm(q - p);
    if (d == 0.0) return false;
    if (options.max_los_distance && d > *options.max_los_distance) return true;
    if (!bvh.occluded(p, q)) {
        row.ids.push_back(j);
        row.dists.push_back(d);
    }
    return true;
}

} // namespace

bool VisibilityGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
    const auto nb = neighbors_of(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

VisibilityGraph build_visibility_graph(std::span<const Node> nodes, const Bvh& bvh,
                                       const GraphBuildOptions& options) {
    check_nodes(nodes);
    const std::int64_t n = static_cast<std::int64_t>(nodes.size());
    std::vector<UpperRow> rows(nodes.size());
    bool coincident = false;

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        UpperRow& row = rows[i];
        for (std::int64_t j = i + 1; j < n; ++j) {
            if (!test_pair(row, nodes, static_cast<std::uint32_t>(i),
                           static_cast<std::uint32_t>(j), bvh, options))
                coincident = true;
        }
    }
    if (coincident) throw std::invalid_argument("distinct nodes share a position");
    return assemble(GraphKind::AllToAll, nodes, rows, {});
}

VisibilityGraph build_subset_graph(std::span<const Node> nodes,
                                   std::span<const std::uint32_t> source_ids,
                                   std::span<const std::uint32_t> target_ids, const Bvh& bvh,
                                   const GraphBuildOptions& options) {
    check_nodes(nodes);
    const auto sources = sorted_unique_ids(source_ids, nodes.size(), "source");
    auto targets = sorted_unique_ids(target_ids, nodes.size(), "target");

    std::vector<std::uint8_t> is_source(nodes.size(), 0), is_target(nodes.size(), 0);
    for (const std::uint32_t s : sources) is_source[s] = 1;
    for (const std::uint32_t t : targets) is_target[t] = 1;

    const std::int64_t n = static_cast<std::int64_t>(nodes.size());
    std::vector<UpperRow> rows(nodes.size());
    bool coincident = false;

    // A pair (i, j) with i < j qualifies iff j is a target counterpart of a
    // source i or vice versa. Merging the two sorted candidate streams
    // enumerates each qualifying pair exactly once, in ascending j.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::uint32_t ui = static_cast<std::uint32_t>(i);
        std::size_t a = targets.size(); // targets > i, taken when i is a source
        std::size_t b = sources.size(); // sources > i, taken when i is a target
        if (is_source[ui])
            a = std::upper_bound(targets.begin(), targets.end(), ui) - targets.begin();
        if (is_target[ui])
            b = std::upper_bound(sources.begin(), sources.end(), ui) - sources.begin();
        UpperRow& row = rows[i];
        while (a < targets.size() || b < sources.size()) {
            std::uint32_t j;
            if (a < targets.size() && (b >= sources.size() || targets[a] <= sources[b])) {
                j = targets[a++];
                if (b < sources.size() && sources[b] == j) ++b;
            } else {
                j = sources[b++];
            }
            if (!test_pair(row, nodes, ui, j, bvh, options)) coincident = true;
        }
    }
    if (coincident) throw std::invalid_argument("distinct nodes share a position");
    return assemble(GraphKind::Subset, nodes, rows, std::move(targets));
}

VisibilityGraph build_subset_graph(std::span<const Node> nodes,
                                   std::span<const std::uint32_t> target_ids, const Bvh& bvh,
                                   const GraphBuildOptions& options) {
    std::vector<std::uint32_t> all(nodes.size());
    std::iota(all.begin(), all.end(), 0u);
    return build_subset_graph(nodes, all, target_ids, bvh, options);
}

EdgeWeights weight_edges(const VisibilityGraph& graph, const AttenuationCoefficient& coefficient) {
    if (!std::isfinite(coefficient.sigma) || coefficient.sigma < 0.0)
        throw std::invalid_argument("weight_edges: sigma must be finite and >= 0");
    EdgeWeights w;
    w.sigma = coefficient.sigma;
    w.condition = coefficient.condition;
    w.weights.resize(graph.distances.size());
    const std::int64_t m = static_cast<std::int64_t>(graph.distances.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < m; ++k)
        w.weights[k] = std::exp(-coefficient.sigma * graph.distances[k]);
    return w;
}

std::vector<std::uint32_t> degree(const VisibilityGraph& graph) {
    std::vector<std::uint32_t> deg(graph.node_count());
    for (std::size_t v = 0; v < deg.size(); ++v)
        deg[v] = static_cast<std::uint32_t>(graph.offsets[v + 1] - graph.offsets[v]);
    return deg;
}

namespace {

void check_aligned(const VisibilityGraph& graph, const EdgeWeights& weights) {
    if (weights.weights.size() != graph.neighbors.size())
        throw std::invalid_argument("weights are not aligned with the graph");
}

// Ordered (per-node, index-ascending) sums keep the reduction bitwise
// deterministic regardless of thread count.
std::vector<double> per_node_sums(const VisibilityGraph& graph, const EdgeWeights& weights) {
    std::vector<double> sums(graph.node_count(), 0.0);
    const std::int64_t n = static_cast<std::int64_t>(graph.node_count());
#pragma omp parallel for schedule(static)
    for (std::int64_t v = 0; v < n; ++v) {
        double acc = 0.0;
        for (std::uint64_t k = graph.offsets[v]; k < graph.offsets[v + 1]; ++k)
            acc += weights.weights[k];
        sums[v] = acc;
    }
    return sums;
}

std::vector<double> candidate_divisors(const VisibilityGraph& graph) {
    const std::size_t n = graph.node_count();
    std::vector<double> div(n, static_cast<double>(n - 1));
    if (graph.kind == GraphKind::Subset) {
        std::vector<std::uint8_t> is_target(n, 0);
        for (const std::uint32_t t : graph.targets) is_target[t] = 1;
        for (std::size_t v = 0; v < n; ++v)
            if (!is_target[v]) div[v] = static_cast<double>(graph.targets.size());
    }
    return div;
}

} // namespace

std::vector<double> score_sum(const VisibilityGraph& graph, const EdgeWeights& weights) {
    check_aligned(graph, weights);
    return per_node_sums(graph, weights);
}

std::vector<double> score_avg(const VisibilityGraph& graph, const EdgeWeights& weights,
                              AvgNormalization normalization) {
    check_aligned(graph, weights);
    std::vector<double> avg = per_node_sums(graph, weights);
    if (normalization == AvgNormalization::Neighborhood) {
        for (std::size_t v = 0; v < avg.size(); ++v) {
            const auto deg = graph.offsets[v + 1] - graph.offsets[v];
            avg[v] = deg == 0 ? 0.0 : avg[v] / static_cast<double>(deg);
        }
    } else {
        const std::vector<double> div = candidate_divisors(graph);
        for (std::size_t v = 0; v < avg.size(); ++v) avg[v] = div[v] > 0.0 ? avg[v] / div[v] : 0.0;
    }
    return avg;
}

ScoreField compute_scores(const VisibilityGraph& graph, const EdgeWeights& weights,
                          AvgNormalization normalization) {
    check_aligned(graph, weights);
    ScoreField field;
    field.degree = degree(graph);
    field.score_sum = per_node_sums(graph, weights);
    field.score_avg = score_avg(graph, weights, normalization);
    field.sigma = weights.sigma;
    field.condition = weights.condition;
    field.avg_normalization = normalization;
    return field;
}

} // namespace wxvis
