// SPDX-License-Identifier: Apache-2.0
// Command-line surface. Verbs mirror the pipeline stages so every
// intermediate artifact can be produced, inspected, and fed back in on its
// own:
//   grid     mesh -> walkable lattice nodes (CSV)
//   graph    mesh -> visibility graph file (binary, or JSON for .json)
//   weight   stored graph + one condition -> per-edge weight file
//   score    stored graph + conditions -> per-node score CSV per condition
//   heatmap  stored graph + conditions -> PPM raster per condition
//   query    mesh + point -> per-condition report for the snapped node
//   run      the whole pipeline plus a manifest
//
// Exit codes: 0 success, 2 configuration error (including usage errors),
// 3 input error, 4 numeric failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "wxvis/bvh.hpp"
#include "wxvis/config.hpp"
#include "wxvis/errors.hpp"
#include "wxvis/graph_io.hpp"
#include "wxvis/heatmap.hpp"
#include "wxvis/mesh.hpp"
#include "wxvis/pipeline.hpp"
#include "wxvis/sampling.hpp"
#include "wxvis/visgraph.hpp"

namespace {

using namespace wxvis;

struct CommonArgs {
    std::string config_path;
    std::string mesh;
    std::vector<std::string> conditions;
    std::string metric;
    std::string out;
    bool shared_scale = false;
    double max_los = 0.0;
    bool max_los_set = false;
};

void add_common_flags(CLI::App& cmd, CommonArgs& args) {
    cmd.add_option("--config", args.config_path, "JSON run configuration file");
    cmd.add_option("--mesh", args.mesh, "OBJ mesh (overrides the config)");
    cmd.add_option("--condition", args.conditions,
                   "Condition token kind[:rate[:wavelength_nm]], e.g. clear, rain:8, "
                   "snow-dry:4, fog-ha, sigma:0.06; repeatable, replaces the config's list")
        ->allow_extra_args(false);
    cmd.add_option("--metric", args.metric, "Heatmap score column: degree, sum, or avg");
    cmd.add_option("--out", args.out, "Output file or directory (overrides the config)");
    cmd.add_flag("--shared-scale", args.shared_scale,
                 "Color every heatmap in the run with one shared min/max");
    cmd.add_option("--max-los", args.max_los, "Ignore sightlines longer than this (meters)")
        ->check(CLI::PositiveNumber)
        ->each([&args](const std::string&) { args.max_los_set = true; });
}

/// Config file first, then flag overrides. Conditions replace wholesale so
/// a command line fully states what it runs under.
RunConfig assemble_config(const CommonArgs& args) {
    RunConfig config;
    if (!args.config_path.empty()) config = load_run_config(args.config_path);
    if (!args.mesh.empty()) config.mesh = args.mesh;
    if (!args.conditions.empty()) {
        config.conditions.clear();
        for (const std::string& token : args.conditions)
            config.conditions.push_back(WeatherCondition::parse(token));
    }
    if (!args.metric.empty()) config.metric = parse_metric(args.metric);
    if (!args.out.empty()) config.out_dir = args.out;
    if (args.shared_scale) config.shared_scale = true;
    if (args.max_los_set) config.max_los_distance = args.max_los;
    return config;
}

void require_mesh(const RunConfig& config) {
    if (config.mesh.empty()) throw ConfigError("a mesh is required (--mesh or config file)");
}

void require_out(const RunConfig& config, const char* what) {
    if (config.out_dir.empty())
        throw ConfigError(std::string("an output path is required (--out): ") + what);
}

std::vector<Node> sample_lattice(const RunConfig& config, const Bvh& bvh) {
    return generate_grid(grid_spec_for(config, bvh), bvh);
}

/// A stored graph's positions as lattice nodes (ids are the row indices).
std::vector<Node> nodes_of(const VisibilityGraph& graph) {
    std::vector<Node> nodes(graph.node_count());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        nodes[i] = Node{static_cast<std::uint32_t>(i), graph.positions[i]};
    return nodes;
}

void report_written(const std::filesystem::path& path) {
    std::cout << "wrote " << path.string() << "\n";
}

int cmd_grid(const CommonArgs& args) {
    const RunConfig config = assemble_config(args);
    require_mesh(config);
    require_out(config, "the nodes CSV file");
    const TriangleMesh mesh = load_obj(config.mesh);
    const Bvh bvh(mesh);
    const std::vector<Node> nodes = sample_lattice(config, bvh);
    write_nodes_csv(config.out_dir, nodes);
    report_written(config.out_dir);
    std::cout << nodes.size() << " walkable nodes\n";
    return 0;
}

int cmd_graph(const CommonArgs& args) {
    const RunConfig config = assemble_config(args);
    require_mesh(config);
    require_out(config, "the graph file (.json for the JSON form)");
    const TriangleMesh mesh = load_obj(config.mesh);
    const Bvh bvh(mesh);
    const std::vector<Node> nodes = sample_lattice(config, bvh);
    if (nodes.size() < 2) throw InputError("fewer than two walkable nodes; nothing to connect");

    const GraphBuildOptions options{config.max_los_distance};
    const VisibilityGraph graph =
        config.targets.empty()
            ? build_visibility_graph(nodes, bvh, options)
            : build_subset_graph(nodes, snap_targets(config, nodes), bvh, options);

    const std::filesystem::path out = config.out_dir;
    if (out.extension() == ".json")
        write_graph_json(out, graph);
    else
        write_graph_binary(out, graph);
    report_written(out);
    std::cout << graph.node_count() << " nodes, " << graph.edge_count() << " edges\n";
    return 0;
}

int cmd_weight(const CommonArgs& args, const std::string& graph_file) {
    const RunConfig config = assemble_config(args);
    require_out(config, "the edge-weight file");
    if (config.conditions.size() != 1)
        throw ConfigError("weight takes exactly one --condition (got " +
                          std::to_string(config.conditions.size()) + ")");
    const VisibilityGraph graph = read_graph(graph_file);
    const AttenuationCoefficient coefficient =
        resolve_condition(config.conditions.front(), config.clear_sigma);
    write_weights_binary(config.out_dir, weight_edges(graph, coefficient));
    report_written(config.out_dir);
    std::cout << "sigma " << coefficient.sigma << " over " << graph.edge_count() << " edges\n";
    return 0;
}

int cmd_score(const CommonArgs& args, const std::string& graph_file) {
    const RunConfig config = assemble_config(args);
    require_out(config, "the output directory");
    const std::vector<ResolvedCondition> resolved = resolve_run_conditions(config);
    if (resolved.empty()) throw ConfigError("at least one --condition is required");

    const VisibilityGraph graph = read_graph(graph_file);
    const std::filesystem::path out = config.out_dir;
    std::filesystem::create_directories(out);
    for (const auto& run : resolved) {
        const ScoreField scores =
            compute_scores(graph, weight_edges(graph, run.coefficient), config.avg_mode);
        const auto path = out / ("scores_" + run.label + ".csv");
        write_scores_csv(path, scores);
        report_written(path);
    }
    return 0;
}

int cmd_heatmap(const CommonArgs& args, const std::string& graph_file) {
    const RunConfig config = assemble_config(args);
    require_out(config, "the output directory");
    const std::vector<ResolvedCondition> resolved = resolve_run_conditions(config);
    if (resolved.empty()) throw ConfigError("at least one --condition is required");

    const VisibilityGraph graph = read_graph(graph_file);
    const std::vector<Node> nodes = nodes_of(graph);
    // Lattice geometry comes from the stored positions, not the config: the
    // graph remembers what it was sampled on.
    const Lattice lattice = Lattice::from_nodes(nodes);

    std::vector<std::vector<double>> fields;
    for (const auto& run : resolved)
        fields.push_back(metric_values(
            compute_scores(graph, weight_edges(graph, run.coefficient), config.avg_mode),
            config.metric));

    HeatmapScale scale;
    if (config.shared_scale) {
        scale.mode = ScaleMode::Shared;
        scale.min = std::numeric_limits<double>::infinity();
        scale.max = -std::numeric_limits<double>::infinity();
        for (const auto& field : fields)
            for (const double v : field) {
                scale.min = std::min(scale.min, v);
                scale.max = std::max(scale.max, v);
            }
    }

    const std::filesystem::path out = config.out_dir;
    std::filesystem::create_directories(out);
    for (std::size_t i = 0; i < resolved.size(); ++i) {
        const auto path = out / ("heatmap_" + resolved[i].label + ".ppm");
        write_heatmap(path, lattice, fields[i], scale);
        report_written(path);
    }
    return 0;
}

int cmd_query(const CommonArgs& args, double x, double y) {
    const RunConfig config = assemble_config(args);
    require_mesh(config);
    const QueryReport report = query_point(config, x, y);

    const Vec3& p = report.position;
    std::cout << "node " << report.node_id << " at (" << p.x << ", " << p.y << ", " << p.z
              << ")\n";
    std::cout << std::left << std::setw(16) << "condition" << std::right << std::setw(12)
              << "sigma" << std::setw(8) << "degree" << std::setw(14) << "s_sum" << std::setw(14)
              << "s_avg" << "\n";
    std::cout << std::setprecision(6);
    for (const auto& entry : report.conditions) {
        std::cout << std::left << std::setw(16) << entry.coefficient.condition.to_token()
                  << std::right << std::setw(12) << entry.coefficient.sigma << std::setw(8)
                  << entry.degree << std::setw(14) << entry.s_sum << std::setw(14) << entry.s_avg
                  << "\n";
    }

    if (config.out_dir.empty()) return 0;

    // Also export the field of scores every node gets toward the queried
    // node, one CSV and one raster per condition.
    const Lattice lattice = Lattice::from_nodes(report.nodes, config.spacing);
    HeatmapScale scale;
    if (config.shared_scale) {
        scale.mode = ScaleMode::Shared;
        scale.min = std::numeric_limits<double>::infinity();
        scale.max = -std::numeric_limits<double>::infinity();
        for (const auto& entry : report.conditions)
            for (const double v : metric_values(entry.toward, config.metric)) {
                scale.min = std::min(scale.min, v);
                scale.max = std::max(scale.max, v);
            }
    }

    const std::filesystem::path out = config.out_dir;
    std::filesystem::create_directories(out);
    for (const auto& entry : report.conditions) {
        const std::string label = entry.coefficient.condition.label();
        const auto csv_path = out / ("scores_toward_" + label + ".csv");
        write_scores_csv(csv_path, entry.toward);
        report_written(csv_path);
        const auto map_path = out / ("heatmap_toward_" + label + ".ppm");
        write_heatmap(map_path, lattice, metric_values(entry.toward, config.metric), scale);
        report_written(map_path);
    }
    return 0;
}

int cmd_run(const CommonArgs& args) {
    const RunConfig config = assemble_config(args);
    const RunArtifacts artifacts = run_pipeline(config);
    report_written(artifacts.nodes_csv);
    report_written(artifacts.graph_file);
    for (const auto& path : artifacts.score_files) report_written(path);
    for (const auto& path : artifacts.heatmap_files) report_written(path);
    report_written(artifacts.manifest_file);
    std::cout << artifacts.node_count << " nodes, " << artifacts.edge_count << " edges\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weather-aware visibility analysis over triangle meshes"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string graph_file;
    double query_x = 0.0;
    double query_y = 0.0;

    CLI::App* grid = app.add_subcommand("grid", "Sample the walkable lattice and write it as CSV");
    CLI::App* graph = app.add_subcommand("graph", "Build the visibility graph and write it out");
    CLI::App* weight =
        app.add_subcommand("weight", "Weight a stored graph's edges under one condition");
    CLI::App* score =
        app.add_subcommand("score", "Score a stored graph, one CSV per condition");
    CLI::App* heatmap =
        app.add_subcommand("heatmap", "Render per-condition score rasters from a stored graph");
    CLI::App* query =
        app.add_subcommand("query", "Report one point's visibility scores per condition");
    CLI::App* run = app.add_subcommand("run", "Run the full pipeline and write all artifacts");

    for (CLI::App* cmd : {grid, graph, weight, score, heatmap, query, run})
        add_common_flags(*cmd, common);
    for (CLI::App* cmd : {weight, score, heatmap})
        cmd->add_option("graph-file", graph_file, "Stored visibility graph (binary or JSON)")
            ->required();
    query->add_option("x", query_x, "Query point x (meters)")->required();
    query->add_option("y", query_y, "Query point y (meters)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // usage problems are configuration errors
    }

    try {
        if (*grid) return cmd_grid(common);
        if (*graph) return cmd_graph(common);
        if (*weight) return cmd_weight(common, graph_file);
        if (*score) return cmd_score(common, graph_file);
        if (*heatmap) return cmd_heatmap(common, graph_file);
        if (*query) return cmd_query(common, query_x, query_y);
        if (*run) return cmd_run(common);
    } catch (const ConfigError& e) {
        std::cerr << "wxvis: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "wxvis: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "wxvis: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "wxvis: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
