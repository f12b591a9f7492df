// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "wxvis/config.hpp"
#include "wxvis/visgraph.hpp"

namespace wxvis {

/// Lattice parameters a config implies over a mesh: explicit bounds when the
/// config has them, otherwise the mesh footprint.
GridSpec grid_spec_for(const RunConfig& config, const Bvh& bvh);

/// Nearest node to (x, y) within spacing/2; InputError when nothing is close.
std::uint32_t snap_to_node(std::span<const Node> nodes, double x, double y, double spacing);

/// Config target coordinates snapped to node ids, sorted and deduplicated.
std::vector<std::uint32_t> snap_targets(const RunConfig& config, std::span<const Node> nodes);

/// The per-node column a metric selects from a score field.
std::vector<double> metric_values(const ScoreField& scores, Metric metric);

struct ResolvedCondition {
    AttenuationCoefficient coefficient;
    std::string label; // filesystem-safe, unique within a run
};

/// Resolves every configured condition to its attenuation coefficient, in
/// config order. Duplicate output labels are ConfigError, since their
/// artifacts would overwrite each other.
std::vector<ResolvedCondition> resolve_run_conditions(const RunConfig& config);

/// What a pipeline run wrote, in write order.
struct RunArtifacts {
    std::filesystem::path out_dir;
    std::filesystem::path nodes_csv;
    std::filesystem::path graph_file;
    std::vector<std::filesystem::path> score_files;   // one per condition
    std::vector<std::filesystem::path> heatmap_files; // one per condition
    std::filesystem::path manifest_file;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
};

/// Full pipeline: mesh -> grid -> graph -> per-condition weights -> scores ->
/// heatmaps -> manifest. Any stage failure rethrows the stage's error with
/// the stage name prefixed, after removing everything written so far.
/// Outputs are deterministic: identical config and mesh give byte-identical
/// artifacts regardless of worker count.
RunArtifacts run_pipeline(const RunConfig& config);

/// One condition's read of a single node, plus the field of scores every
/// other node gets toward it (that node as the sole subset target).
struct QueryConditionReport {
    AttenuationCoefficient coefficient;
    std::uint32_t degree = 0;
    double s_sum = 0.0;
    double s_avg = 0.0;
    ScoreField toward; // over all nodes, subset graph with the queried node as target
};

struct QueryReport {
    std::uint32_t node_id = 0;
    Vec3 position{};
    std::vector<Node> nodes; // the sampled lattice; ids index the score fields
    std::vector<QueryConditionReport> conditions;
};

/// Snaps (x, y) to the nearest walkable node within spacing/2 and reports
/// degree, S_S, and S_A per condition on the all-to-all graph, plus the
/// single-target subset field. Throws InputError when nothing snaps.
QueryReport query_point(const RunConfig& config, double x, double y);

} // namespace wxvis
