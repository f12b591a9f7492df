// SPDX-License-Identifier: Apache-2.0
#include "wxvis/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <string>

#include <json.hpp>

#include "wxvis/bvh.hpp"
#include "wxvis/errors.hpp"
#include "wxvis/graph_io.hpp"
#include "wxvis/heatmap.hpp"
#include "wxvis/mesh.hpp"

namespace wxvis {

namespace {

using nlohmann::json;

/// Runs one stage, prefixing any failure with the stage name so the cause
/// is attributable. Error categories pass through unchanged (they map to
/// distinct exit codes); everything else counts as an input failure.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError("stage " + std::string(name) + ": " + e.what());
    } catch (const InputError& e) {
        throw InputError("stage " + std::string(name) + ": " + e.what());
    } catch (const NumericError& e) {
        throw NumericError("stage " + std::string(name) + ": " + e.what());
    } catch (const std::exception& e) {
        throw InputError("stage " + std::string(name) + ": " + e.what());
    }
}

Rect2 mesh_footprint(const Bvh& bvh) {
    const Aabb box = bvh.bounds();
    return {box.min.x, box.min.y, box.max.x, box.max.y};
}

json config_echo(const RunConfig& config) {
    json grid;
    if (config.bounds)
        grid["bounds"] = {config.bounds->min_x, config.bounds->min_y, config.bounds->max_x,
                          config.bounds->max_y};
    grid["spacing"] = config.spacing;
    grid["eye_height"] = config.eye_height;
    grid["walkable_cutoff"] = config.walkable_cutoff;
    if (config.drop_height) grid["drop_height"] = *config.drop_height;

    json doc;
    doc["mesh"] = config.mesh;
    doc["grid"] = grid;
    json conditions = json::array();
    for (const auto& condition : config.conditions) conditions.push_back(condition.to_token());
    doc["conditions"] = conditions;
    doc["metric"] = metric_name(config.metric);
    if (!config.targets.empty()) {
        json targets = json::array();
        for (const auto& [x, y] : config.targets) targets.push_back({x, y});
        doc["targets"] = targets;
    }
    doc["out"] = config.out_dir;
    doc["shared_scale"] = config.shared_scale;
    if (config.max_los_distance) doc["max_los"] = *config.max_los_distance;
    doc["avg_mode"] =
        config.avg_mode == AvgNormalization::Neighborhood ? "neighborhood" : "candidate-set";
    doc["clear_sigma"] = config.clear_sigma;
    doc["graph_format"] = config.graph_format == GraphFileFormat::Binary ? "binary" : "json";
    return doc;
}

/// Removes everything this run wrote; used when a stage fails after files
/// already exist. Directory removal is best-effort (only if now empty).
class WrittenFiles {
  public:
    void record(const std::filesystem::path& path) { paths_.push_back(path); }

    void remove_all() noexcept {
        std::error_code ec;
        for (const auto& path : paths_) std::filesystem::remove(path, ec);
        for (const auto& dir : created_dirs_) std::filesystem::remove(dir, ec);
    }

    void record_created_dir(const std::filesystem::path& dir) { created_dirs_.push_back(dir); }

  private:
    std::vector<std::filesystem::path> paths_;
    std::vector<std::filesystem::path> created_dirs_;
};

struct ConditionRun {
    ResolvedCondition resolved;
    ScoreField scores;
};

} // namespace

GridSpec grid_spec_for(const RunConfig& config, const Bvh& bvh) {
    GridSpec spec;
    spec.bounds = config.bounds ? *config.bounds : mesh_footprint(bvh);
    spec.spacing = config.spacing;
    spec.eye_height = config.eye_height;
    spec.walkable_cutoff = config.walkable_cutoff;
    spec.drop_height = config.drop_height;
    return spec;
}

std::uint32_t snap_to_node(std::span<const Node> nodes, double x, double y, double spacing) {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_id = 0;
    for (const Node& node : nodes) {
        const double dx = node.position.x - x;
        const double dy = node.position.y - y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best) {
            best = d2;
            best_id = node.id;
        }
    }
    const double radius = spacing * 0.5 + 1e-9;
    if (!(std::sqrt(best) <= radius))
        throw InputError("no node within spacing/2 of (" + std::to_string(x) + ", " +
                         std::to_string(y) + ")");
    return best_id;
}

std::vector<std::uint32_t> snap_targets(const RunConfig& config, std::span<const Node> nodes) {
    std::vector<std::uint32_t> ids;
    for (const auto& [x, y] : config.targets)
        ids.push_back(snap_to_node(nodes, x, y, config.spacing));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::vector<double> metric_values(const ScoreField& scores, Metric metric) {
    switch (metric) {
    case Metric::Degree:
        return {scores.degree.begin(), scores.degree.end()};
    case Metric::Sum:
        return scores.score_sum;
    case Metric::Avg:
        return scores.score_avg;
    }
    return scores.score_sum;
}

std::vector<ResolvedCondition> resolve_run_conditions(const RunConfig& config) {
    std::vector<ResolvedCondition> resolved;
    std::set<std::string> labels;
    for (const auto& condition : config.conditions) {
        ResolvedCondition entry{resolve_condition(condition, config.clear_sigma),
                                condition.label()};
        if (!labels.insert(entry.label).second)
            throw ConfigError("two conditions share the output label \"" + entry.label + "\"");
        resolved.push_back(std::move(entry));
    }
    return resolved;
}

RunArtifacts run_pipeline(const RunConfig& config) {
    validate_run_config(config); // its errors already carry the config: prefix

    // Resolve conditions before the expensive stages so a bad condition
    // cannot waste a long graph build.
    std::vector<ConditionRun> runs;
    stage("weights", [&] {
        for (auto& resolved : resolve_run_conditions(config))
            runs.push_back({std::move(resolved), {}});
    });

    const TriangleMesh mesh = stage("mesh", [&] { return load_obj(config.mesh); });
    const Bvh bvh = stage("mesh", [&] { return Bvh(mesh); });

    const GridSpec spec = grid_spec_for(config, bvh);
    const std::vector<Node> nodes = stage("grid", [&] {
        auto sampled = generate_grid(spec, bvh);
        if (sampled.size() < 2)
            throw InputError("fewer than two walkable nodes; nothing to connect");
        return sampled;
    });

    const GraphBuildOptions options{config.max_los_distance};
    const VisibilityGraph graph = stage("graph", [&] {
        if (config.targets.empty()) return build_visibility_graph(nodes, bvh, options);
        return build_subset_graph(nodes, snap_targets(config, nodes), bvh, options);
    });

    stage("scores", [&] {
        for (auto& run : runs) {
            const EdgeWeights weights = weight_edges(graph, run.resolved.coefficient);
            run.scores = compute_scores(graph, weights, config.avg_mode);
        }
    });

    // One scale across conditions when requested, over the exported metric.
    HeatmapScale scale;
    if (config.shared_scale) {
        scale.mode = ScaleMode::Shared;
        scale.min = std::numeric_limits<double>::infinity();
        scale.max = -std::numeric_limits<double>::infinity();
        for (const auto& run : runs) {
            for (const double v : metric_values(run.scores, config.metric)) {
                scale.min = std::min(scale.min, v);
                scale.max = std::max(scale.max, v);
            }
        }
    }

    RunArtifacts artifacts;
    artifacts.out_dir = config.out_dir;
    artifacts.node_count = nodes.size();
    artifacts.edge_count = graph.edge_count();

    WrittenFiles written;
    try {
        stage("export", [&] {
            const std::filesystem::path out = config.out_dir;
            if (std::filesystem::create_directories(out)) written.record_created_dir(out);

            artifacts.nodes_csv = out / "nodes.csv";
            written.record(artifacts.nodes_csv);
            write_nodes_csv(artifacts.nodes_csv, nodes);

            const bool binary = config.graph_format == GraphFileFormat::Binary;
            artifacts.graph_file = out / (binary ? "graph.vgat" : "graph.json");
            written.record(artifacts.graph_file);
            if (binary)
                write_graph_binary(artifacts.graph_file, graph);
            else
                write_graph_json(artifacts.graph_file, graph);

            const Lattice lattice = Lattice::from_nodes(nodes, config.spacing);
            json manifest_heatmaps = json::object();
            for (const auto& run : runs) {
                const auto scores_path = out / ("scores_" + run.resolved.label + ".csv");
                written.record(scores_path);
                write_scores_csv(scores_path, run.scores);
                artifacts.score_files.push_back(scores_path);

                const auto heatmap_path = out / ("heatmap_" + run.resolved.label + ".ppm");
                written.record(heatmap_path);
                written.record(heatmap_path.string() + ".json");
                const HeatmapScale used =
                    write_heatmap(heatmap_path, lattice, metric_values(run.scores, config.metric),
                                  scale);
                artifacts.heatmap_files.push_back(heatmap_path);
                manifest_heatmaps[run.resolved.label] = {{"file", heatmap_path.filename().string()},
                                                         {"min", used.min},
                                                         {"max", used.max}};
            }

            json manifest;
            manifest["format"] = "wxvis-run-manifest";
            manifest["version"] = 1;
            manifest["config"] = config_echo(config);
            json resolved = json::array();
            for (const auto& run : runs)
                resolved.push_back({{"condition", run.resolved.coefficient.condition.to_token()},
                                    {"label", run.resolved.label},
                                    {"sigma", run.resolved.coefficient.sigma}});
            manifest["resolved_conditions"] = resolved;
            manifest["node_count"] = artifacts.node_count;
            manifest["edge_count"] = artifacts.edge_count;
            manifest["graph_file"] = artifacts.graph_file.filename().string();
            manifest["heatmaps"] = manifest_heatmaps;

            artifacts.manifest_file = out / "manifest.json";
            written.record(artifacts.manifest_file);
            std::ofstream stream(artifacts.manifest_file, std::ios::trunc);
            if (!stream)
                throw InputError("cannot open for writing: " + artifacts.manifest_file.string());
            stream << manifest.dump(2) << "\n";
            stream.flush();
            if (!stream) throw InputError("write failed: " + artifacts.manifest_file.string());
        });
    } catch (...) {
        written.remove_all();
        throw;
    }
    return artifacts;
}

QueryReport query_point(const RunConfig& config, double x, double y) {
    if (config.mesh.empty()) throw ConfigError("config: a mesh path is required");
    if (config.conditions.empty()) throw ConfigError("config: at least one condition is required");
    const std::vector<ResolvedCondition> resolved =
        stage("weights", [&] { return resolve_run_conditions(config); });

    const TriangleMesh mesh = stage("mesh", [&] { return load_obj(config.mesh); });
    const Bvh bvh = stage("mesh", [&] { return Bvh(mesh); });
    const GridSpec spec = grid_spec_for(config, bvh);
    const std::vector<Node> nodes = stage("grid", [&] {
        auto sampled = generate_grid(spec, bvh);
        if (sampled.size() < 2)
            throw InputError("fewer than two walkable nodes; nothing to connect");
        return sampled;
    });

    QueryReport report;
    report.node_id = stage("grid", [&] { return snap_to_node(nodes, x, y, config.spacing); });
    report.position = nodes[report.node_id].position;
    report.nodes = nodes;

    const GraphBuildOptions options{config.max_los_distance};
    const VisibilityGraph graph =
        stage("graph", [&] { return build_visibility_graph(nodes, bvh, options); });
    const std::vector<std::uint32_t> target{report.node_id};
    const VisibilityGraph toward =
        stage("graph", [&] { return build_subset_graph(nodes, target, bvh, options); });

    for (const auto& run : resolved) {
        QueryConditionReport entry;
        entry.coefficient = run.coefficient;
        stage("scores", [&] {
            const ScoreField all = compute_scores(graph, weight_edges(graph, entry.coefficient),
                                                  config.avg_mode);
            entry.degree = all.degree[report.node_id];
            entry.s_sum = all.score_sum[report.node_id];
            entry.s_avg = all.score_avg[report.node_id];
            entry.toward = compute_scores(toward, weight_edges(toward, entry.coefficient),
                                          config.avg_mode);
        });
        report.conditions.push_back(std::move(entry));
    }
    return report;
}

} // namespace wxvis
