// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wxvis/attenuation.hpp"
#include "wxvis/sampling.hpp"
#include "wxvis/visgraph.hpp"

namespace wxvis {

enum class Metric : std::uint8_t { Degree = 0, Sum = 1, Avg = 2 };

const char* metric_name(Metric metric);
Metric parse_metric(const std::string& name); // throws ConfigError

enum class GraphFileFormat : std::uint8_t { Binary = 0, Json = 1 };

/// Everything a run needs. Field defaults are the reference settings:
/// 1 m spacing, 1.7 m eye height, 550 nm, clear sigma 0.00015 m^-1.
struct RunConfig {
    std::string mesh;
    std::optional<Rect2> bounds; // unset: the mesh footprint
    double spacing = 1.0;
    double eye_height = 1.7;
    double walkable_cutoff = 0.5;
    std::optional<double> drop_height;
    std::vector<WeatherCondition> conditions;
    Metric metric = Metric::Sum; // drives heatmap exports
    /// Subset targets by ground coordinate; each snaps to the nearest node
    /// within spacing/2. Empty means an all-to-all graph.
    std::vector<std::array<double, 2>> targets;
    std::string out_dir;
    bool shared_scale = false;
    std::optional<double> max_los_distance;
    AvgNormalization avg_mode = AvgNormalization::Neighborhood;
    double clear_sigma = kClearSigma;
    GraphFileFormat graph_format = GraphFileFormat::Binary;
};

/// Parses the JSON config text. Unknown keys and malformed values are
/// ConfigError; this is strict on purpose so typos cannot silently change a
/// run. Paths in the file are taken as written (resolve relative to the
/// process working directory).
RunConfig parse_run_config(const std::string& json_text);

RunConfig load_run_config(const std::filesystem::path& path);

/// Checks the invariants a pipeline run needs: a mesh path, at least one
/// condition, positive spacing, an output directory. Throws ConfigError.
void validate_run_config(const RunConfig& config);

} // namespace wxvis
