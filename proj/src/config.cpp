// SPDX-License-Identifier: Apache-2.0
#include "wxvis/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "wxvis/errors.hpp"

namespace wxvis {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError("config: " + message); }

double take_number(const json& value, const char* key) {
    if (!value.is_number()) fail(std::string(key) + " must be a number");
    const double v = value.get<double>();
    if (!std::isfinite(v)) fail(std::string(key) + " must be finite");
    return v;
}

double take_positive(const json& value, const char* key) {
    const double v = take_number(value, key);
    if (v <= 0.0) fail(std::string(key) + " must be > 0");
    return v;
}

void reject_unknown_keys(const json& object, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, unused] : object.items())
        if (!known.contains(key)) fail("unknown key \"" + key + "\" in " + where);
}

WeatherCondition parse_condition_entry(const json& entry) {
    if (entry.is_string()) {
        try {
            return WeatherCondition::parse(entry.get<std::string>());
        } catch (const ConfigError& e) {
            fail(e.what());
        }
    }
    if (!entry.is_object()) fail("conditions entries must be tokens or objects");
    reject_unknown_keys(entry, {"kind", "rate", "wavelength", "sigma"}, "a condition");
    if (!entry.contains("kind")) fail("condition object needs a \"kind\"");
    std::string token = entry.at("kind").get<std::string>();
    if (entry.contains("sigma")) {
        token += ":" + std::to_string(take_number(entry.at("sigma"), "condition sigma"));
    } else if (entry.contains("rate")) {
        token += ":" + std::to_string(take_number(entry.at("rate"), "condition rate"));
    }
    if (entry.contains("wavelength"))
        token += ":" + std::to_string(take_number(entry.at("wavelength"), "condition wavelength"));
    try {
        return WeatherCondition::parse(token);
    } catch (const ConfigError& e) {
        fail(e.what());
    }
}

void parse_grid_section(const json& grid, RunConfig& config) {
    reject_unknown_keys(
        grid, {"bounds", "spacing", "eye_height", "walkable_cutoff", "drop_height"}, "\"grid\"");
    if (grid.contains("bounds")) {
        const auto& b = grid.at("bounds");
        if (!b.is_array() || b.size() != 4)
            fail("grid.bounds must be [min_x, min_y, max_x, max_y]");
        Rect2 bounds;
        bounds.min_x = take_number(b[0], "grid.bounds");
        bounds.min_y = take_number(b[1], "grid.bounds");
        bounds.max_x = take_number(b[2], "grid.bounds");
        bounds.max_y = take_number(b[3], "grid.bounds");
        if (bounds.degenerate()) fail("grid.bounds must span a positive area");
        config.bounds = bounds;
    }
    if (grid.contains("spacing")) config.spacing = take_positive(grid.at("spacing"), "grid.spacing");
    if (grid.contains("eye_height"))
        config.eye_height = take_number(grid.at("eye_height"), "grid.eye_height");
    if (grid.contains("walkable_cutoff"))
        config.walkable_cutoff = take_positive(grid.at("walkable_cutoff"), "grid.walkable_cutoff");
    if (grid.contains("drop_height"))
        config.drop_height = take_number(grid.at("drop_height"), "grid.drop_height");
}

} // namespace

const char* metric_name(Metric metric) {
    switch (metric) {
    case Metric::Degree:
        return "degree";
    case Metric::Sum:
        return "sum";
    case Metric::Avg:
        return "avg";
    }
    return "sum";
}

Metric parse_metric(const std::string& name) {
    if (name == "degree") return Metric::Degree;
    if (name == "sum") return Metric::Sum;
    if (name == "avg") return Metric::Avg;
    throw ConfigError("config: unknown metric \"" + name + "\" (use degree, sum, or avg)");
}

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("top level must be an object");
    reject_unknown_keys(doc,
                        {"mesh", "grid", "conditions", "metric", "targets", "out", "shared_scale",
                         "max_los", "avg_mode", "clear_sigma", "graph_format"},
                        "the config");

    RunConfig config;
    try {
        if (doc.contains("mesh")) config.mesh = doc.at("mesh").get<std::string>();
        if (doc.contains("grid")) parse_grid_section(doc.at("grid"), config);
        if (doc.contains("conditions")) {
            const auto& list = doc.at("conditions");
            if (!list.is_array()) fail("\"conditions\" must be an array");
            for (const auto& entry : list) config.conditions.push_back(parse_condition_entry(entry));
        }
        if (doc.contains("metric")) config.metric = parse_metric(doc.at("metric").get<std::string>());
        if (doc.contains("targets")) {
            const auto& list = doc.at("targets");
            if (!list.is_array()) fail("\"targets\" must be an array of [x, y] points");
            for (const auto& entry : list) {
                if (!entry.is_array() || entry.size() < 2 || entry.size() > 3)
                    fail("each target must be [x, y] or [x, y, z]");
                config.targets.push_back(
                    {take_number(entry[0], "target x"), take_number(entry[1], "target y")});
            }
        }
        if (doc.contains("out")) config.out_dir = doc.at("out").get<std::string>();
        if (doc.contains("shared_scale")) {
            if (!doc.at("shared_scale").is_boolean()) fail("\"shared_scale\" must be a boolean");
            config.shared_scale = doc.at("shared_scale").get<bool>();
        }
        if (doc.contains("max_los"))
            config.max_los_distance = take_positive(doc.at("max_los"), "max_los");
        if (doc.contains("avg_mode")) {
            const std::string mode = doc.at("avg_mode").get<std::string>();
            if (mode == "neighborhood")
                config.avg_mode = AvgNormalization::Neighborhood;
            else if (mode == "candidate-set")
                config.avg_mode = AvgNormalization::CandidateSet;
            else
                fail("avg_mode must be \"neighborhood\" or \"candidate-set\"");
        }
        if (doc.contains("clear_sigma"))
            config.clear_sigma = take_positive(doc.at("clear_sigma"), "clear_sigma");
        if (doc.contains("graph_format")) {
            const std::string format = doc.at("graph_format").get<std::string>();
            if (format == "binary")
                config.graph_format = GraphFileFormat::Binary;
            else if (format == "json")
                config.graph_format = GraphFileFormat::Json;
            else
                fail("graph_format must be \"binary\" or \"json\"");
        }
    } catch (const json::exception& e) {
        fail(std::string("malformed value: ") + e.what());
    }
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream stream(path);
    if (!stream) throw ConfigError("config: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(stream)), std::istreambuf_iterator<char>());
    if (stream.bad()) throw ConfigError("config: read failed for " + path.string());
    return parse_run_config(text);
}

void validate_run_config(const RunConfig& config) {
    if (config.mesh.empty()) fail("a mesh path is required");
    if (config.conditions.empty()) fail("at least one condition is required");
    if (config.out_dir.empty()) fail("an output directory is required");
    if (!(config.spacing > 0.0)) fail("spacing must be > 0");
}

} // namespace wxvis
